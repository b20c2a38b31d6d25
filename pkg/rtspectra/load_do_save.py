import json
import logging
import os.path
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import pandas as pd

from rtspectra.utils import to_jsonable

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


def load_json(path: str) -> Dict[str, Any]:
    with open(path, "r") as f:
        obj = json.load(f)
    return obj


def save_json(obj: Any, path: str) -> None:
    with open(path, "w") as f:
        json.dump(to_jsonable(obj), f, indent=4, sort_keys=True)
        f.write("\n")


def load_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path)


def save_csv(obj: pd.DataFrame, path: str) -> None:
    obj.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


type_to_fun_mapper = [
    {"type": pd.DataFrame, "load": load_csv, "save": save_csv},
    {"type": dict, "load": load_json, "save": save_json},
]


def find_mapper(out_type: Any) -> Dict[str, Any]:
    for mapper in type_to_fun_mapper:
        mapper_type = mapper.get("type")
        if issubclass(out_type, mapper_type):
            return mapper
    raise NotImplementedError(f"No persistence mapper for {out_type}")


def save(obj: Any, path: str) -> str:
    mapper = find_mapper(type(obj))
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    mapper["save"](obj, path)
    logger.debug(f"{path} saved.")
    return path


def load_do_save(
    path: str,
    executable: Callable[..., Any],
    return_type: Optional[type] = None,
    **kwargs: Any,
) -> Any:
    """Loads ``path`` if it exists, otherwise runs ``executable(**kwargs)``
    and stores its result there."""
    if return_type is None:
        return_type = executable.__annotations__["return"]

    mapper = find_mapper(return_type)
    if os.path.exists(path):
        out = mapper["load"](path)
        logger.info(f"{path} loaded.")
        return out

    obj = executable(**kwargs)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    mapper["save"](obj, path)
    logger.info(f"{path} saved.")
    return obj
