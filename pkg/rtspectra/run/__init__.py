from rtspectra.run.commands import run_command, str2command
from rtspectra.run.config import RunConfig, load_config
from rtspectra.run.context import RunContext, prepare
from rtspectra.run.verify import PropertyResult, VerifySuite, str2property

__all__ = [
    "PropertyResult",
    "RunConfig",
    "RunContext",
    "VerifySuite",
    "load_config",
    "prepare",
    "run_command",
    "str2command",
    "str2property",
]
