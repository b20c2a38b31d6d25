"""YAML logging configuration for the CLI and for joblib workers."""
import functools
import logging.config
import logging.handlers
import pathlib
from queue import Queue
from typing import Any, Callable, Dict, Optional, Union

import yaml
from joblib import delayed

PACKAGE_LOGGER = "rtspectra"
DEFAULT_CONFIG = pathlib.Path(__file__).with_name("logging.yaml")

global_logger_config: Dict[str, Any] = {}


def load_logging_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    config_file = (
        pathlib.Path(config_path) if config_path is not None else DEFAULT_CONFIG
    )
    with open(config_file) as f_in:
        return yaml.safe_load(f_in)


def place_log_files(config: Dict[str, Any], log_dir: str) -> Dict[str, Any]:
    """Moves relative ``filename`` entries of file handlers under
    ``log_dir``, next to the run's results."""
    for handler in config.get("handlers", {}).values():
        filename = handler.get("filename")
        if filename is None or pathlib.Path(filename).is_absolute():
            continue
        target = pathlib.Path(log_dir) / filename
        target.parent.mkdir(parents=True, exist_ok=True)
        handler["filename"] = str(target)
    return config


def setup_logging(
    config_path: Optional[str] = None,
    level: Optional[Union[int, str]] = None,
    log_dir: Optional[str] = None,
) -> None:
    config = load_logging_config(config_path)
    if log_dir is not None:
        place_log_files(config, log_dir)
    global_logger_config.clear()
    global_logger_config.update(config)
    logging.config.dictConfig(global_logger_config)
    if level is not None:
        logging.getLogger(PACKAGE_LOGGER).setLevel(level)


def _queue_of_root() -> "Optional[Queue[Any]]":
    handlers = logging.getLogger().handlers
    if handlers and isinstance(handlers[0], logging.handlers.QueueHandler):
        return handlers[0].queue
    return None


def configure_worker(
    levels: Dict[str, int],
    queue: "Optional[Queue[Any]]",
    root_level: int,
) -> None:
    root = logging.getLogger()
    if queue is not None and not root.hasHandlers():
        root.addHandler(logging.handlers.QueueHandler(queue))
        root.setLevel(root_level)
    for name, level in levels.items():
        logging.getLogger(name).setLevel(level)


def delayed_with_logging(func: Callable[..., Any]) -> Callable[..., Any]:
    """``joblib.delayed`` that re-applies the parent's configured logger
    levels, and its queue handler if the root logger has one, inside the
    worker before ``func`` runs."""
    levels = {
        name: logging.getLogger(name).level
        for name in global_logger_config.get("loggers", {})
    }
    queue = _queue_of_root()
    if not levels and queue is None:
        return delayed(func)
    root_level = logging.getLogger().level

    @functools.wraps(func)
    def run_in_worker(*args: Any, **kwargs: Any) -> Any:
        configure_worker(levels, queue, root_level)
        return func(*args, **kwargs)

    return delayed(run_in_worker)
