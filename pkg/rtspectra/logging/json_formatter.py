import datetime as dt
import json
import logging
from typing import Any, Dict, Optional

from rtspectra.utils import to_jsonable

# attributes every LogRecord carries; anything else arrived through extra=
STANDARD_ATTRS = frozenset(vars(logging.makeLogRecord({}))) | {
    "message",
    "asctime",
    "taskName",
}


def record_extras(record: logging.LogRecord) -> Dict[str, Any]:
    return {
        key: value
        for key, value in vars(record).items()
        if key not in STANDARD_ATTRS
    }


class JSONFormatter(logging.Formatter):
    """One JSON object per line.

    ``fmt_keys`` maps output keys to record attributes. Solver context passed
    with ``extra=`` (``xi``, ``rate``, ``n_steps``, ...) is appended after
    conversion with :func:`rtspectra.utils.to_jsonable`, so numpy values
    serialize and non-finite floats become null.
    """

    def __init__(self, *, fmt_keys: Optional[Dict[str, str]] = None) -> None:
        super().__init__()
        self.fmt_keys = dict(fmt_keys or {})

    def format(self, record: logging.LogRecord) -> str:
        return json.dumps(self.to_dict(record), default=str)

    def to_dict(self, record: logging.LogRecord) -> Dict[str, Any]:
        computed: Dict[str, Any] = {
            "message": record.getMessage(),
            "timestamp": dt.datetime.fromtimestamp(
                record.created, tz=dt.timezone.utc
            ).isoformat(),
        }
        if record.exc_info:
            computed["exc_info"] = self.formatException(record.exc_info)
        if record.stack_info:
            computed["stack_info"] = self.formatStack(record.stack_info)

        out: Dict[str, Any] = {}
        for key, attr in self.fmt_keys.items():
            if attr in computed:
                out[key] = computed.pop(attr)
            else:
                out[key] = getattr(record, attr, None)
        out.update(computed)
        out.update(to_jsonable(record_extras(record)))
        return out
