import logging.config
from itertools import chain
from typing import Any, Iterator
from collections.abc import Iterable
import dataclasses
import os
import pathlib

import tomli

from poly_images.budgets import Budgets
from poly_images.errors import InvalidInput
from poly_images.registry import PathRegistry

log = logging.getLogger(__name__)

DEFAULT_CONFIG_PATHS: list[str] = [
    "${XDG_CONFIG_HOME}/poly-images/config.toml",
    "./poly-images.toml",
]
_DEFAULT_VARS = {
    "${XDG_CONFIG_HOME}": "~/.config",
}
BUILTIN_CONFIG = """
path.core = "poly_images.paths.core.CorePath"
path.block_split = "poly_images.paths.block_split.BlockSplitPath"
path.commutator = "poly_images.paths.commutator.CommutatorPath"
path.fallback = "poly_images.paths.fallback.FallbackPath"

sampling.box = 10
sampling.max_tries = 64
fallback.tries = 256
commutator.tries = 64
oracle.workers = 1
oracle.max_triples = 1073741824
oracle.max_matrices = 1048576
oracle.sample_batch = 1024
"""

# dotted config key -> Budgets field
BUDGET_KEYS = {
    "sampling.box": "box",
    "sampling.max_tries": "max_tries",
    "fallback.tries": "fallback_tries",
    "commutator.tries": "commutator_tries",
    "oracle.workers": "oracle_workers",
    "oracle.max_triples": "oracle_max_triples",
    "oracle.max_matrices": "oracle_max_matrices",
    "oracle.sample_batch": "oracle_sample_batch",
}

DEFAULT_LOGGING_CONFIG_PATH: str = "${XDG_CONFIG_HOME}/poly-images/logging.toml"
BUILTIN_LOGGING_CONFIG = """
version = 1
disable_existing_loggers = false

[formatters.default]
# python doesn't expose the msec as a strftime placeholder, but it's part of the record as a field
format = "%(asctime)s.%(msecs)03d:%(levelname)s:%(name)s::%(message)s"
datefmt = "%Y-%m-%d %H:%M:%S"

# stdout carries the JSON document
[handlers.console]
class = "logging.StreamHandler"
level = "WARNING"
formatter = "default"
stream = "ext://sys.stderr"

[loggers.root]
level = "WARNING"
handlers = ["console"]
"""


def _resolve_config_path(configpaths: list[str]) -> Iterator[pathlib.Path]:
    for configpath in configpaths:
        resolved_path = os.path.expandvars(configpath)
        for var, value in _DEFAULT_VARS.items():
            resolved_path = resolved_path.replace(var, value)
        resolved_path = os.path.expanduser(resolved_path)
        yield pathlib.Path(resolved_path)


def _ensure_configs() -> bool:
    # populate the default builtin configs; a read-only home just means running on the builtins
    try:
        config_folder = next(_resolve_config_path(["${XDG_CONFIG_HOME}/poly-images"]))
        config_folder.mkdir(mode=0o755, parents=True, exist_ok=True)
        logging_config_path = next(_resolve_config_path([DEFAULT_LOGGING_CONFIG_PATH]))
        if not logging_config_path.exists():
            with open(logging_config_path, mode="w") as f:
                f.write(BUILTIN_LOGGING_CONFIG)

        pim_config = next(_resolve_config_path([DEFAULT_CONFIG_PATHS[0]]))
        if not pim_config.exists():
            with open(pim_config, mode="w") as f:
                f.write(BUILTIN_CONFIG)
    except OSError:
        return False
    return True


def _load_configfile(path: pathlib.Path) -> dict[str, Any]:
    try:
        with open(path, mode="rb") as f:
            return tomli.load(f)
    except tomli.TOMLDecodeError as e:
        raise InvalidInput(f"{path} is not valid TOML: {e}", location=str(path)) from e
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e}", location=str(path)) from e


def setup_logging():
    logging_config_path = next(_resolve_config_path([DEFAULT_LOGGING_CONFIG_PATH]))
    if _ensure_configs() and logging_config_path.exists():
        logging.config.dictConfig(_load_configfile(logging_config_path))
    else:
        logging.config.dictConfig(tomli.loads(BUILTIN_LOGGING_CONFIG))


def _load_config(configpaths: list[str] = []) -> dict[str, Any]:
    _ensure_configs()
    default_paths = [path for path in _resolve_config_path(DEFAULT_CONFIG_PATHS) if path.exists()]
    user_paths = [pathlib.Path(os.path.expandvars(path)).expanduser() for path in configpaths]

    configs = [_load_configfile(path) for path in default_paths + user_paths]
    configs.insert(0, tomli.loads(BUILTIN_CONFIG))

    return _merge_configs(*configs)


def _merge_configs(*configs: dict[str, Any]) -> dict[str, Any]:
    # flatten the configs first
    def _flatten_dict(d: dict[str, Any], current_path: list[str] = [], delimiter: str = ".") -> Iterable[tuple[str, Any]]:
        for key, val in d.items():
            current_path.append(key)
            if isinstance(val, dict):
                yield from _flatten_dict(val, current_path, delimiter)
            else:
                yield delimiter.join(current_path), val
            current_path.pop()

    flattened = [dict(_flatten_dict(config)) for config in configs]
    result = {}
    for key in set(chain.from_iterable(flattened)):
        values = [flat[key] for flat in flattened if key in flat]
        result[key] = values[-1]

    return result


@dataclasses.dataclass
class Config:
    paths: PathRegistry
    budgets: Budgets

    @classmethod
    def from_merged(cls, merged_config: dict[str, Any]) -> "Config":
        path_config = {k.removeprefix("path."): v for k, v in merged_config.items() if k.startswith("path.")}
        unknown = sorted(k for k in merged_config if not k.startswith("path.") and k not in BUDGET_KEYS)
        if unknown:
            raise InvalidInput(f"unknown configuration keys {unknown}", location=f"config.{unknown[0]}")
        budgets = Budgets.from_dict({field: merged_config[key] for key, field in BUDGET_KEYS.items() if key in merged_config})
        return cls(paths=PathRegistry.from_dict(path_config), budgets=budgets)

    @classmethod
    def load_from_files(cls, configpaths: list[str] = []) -> "Config":
        return cls.from_merged(_load_config(configpaths))

    @classmethod
    def builtin(cls) -> "Config":
        return cls.from_merged(_merge_configs(tomli.loads(BUILTIN_CONFIG)))

    def to_primitive(self) -> dict[str, Any]:
        return {"paths": self.paths.to_primitive(), "budgets": self.budgets.to_primitive()}
