"""
Run configuration: YAML defaults, environment override of the output directory.
"""
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Tuple

import yaml
from dotenv import load_dotenv

from hqgeo.utils.exceptions import InputError


DEFAULT_SEED = 42
OUTPUT_DIR_ENV = 'HQGEO_OUTPUT_DIR'
OUTPUT_FORMATS = ('csv', 'json')


@dataclass
class RunConfig:
    """
    Everything a subcommand needs besides its own numeric parameters.
    """
    subcommand: str
    params: Dict[str, Any] = field(default_factory=dict)
    output_format: str = 'csv'
    output_path: Optional[str] = None
    seed: int = DEFAULT_SEED
    as_published: bool = False
    log_dir: Optional[str] = None
    progress: bool = True

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise InputError(f"Unknown output format '{self.output_format}'")


def _normalize_keys(section: Dict[str, Any]) -> Dict[str, Any]:
    return {str(k).replace('-', '_'): v for k, v in section.items()}


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Read a YAML config file.

    Top-level scalar keys are global flag defaults; a mapping under a
    subcommand's name holds that subcommand's defaults. Keys use the long flag
    spelling with dashes.

    Args:
        path: YAML file path

    Returns:
        Dict with dashes in keys replaced by underscores, nested per subcommand

    Raises:
        InputError: If the file is missing or not a YAML mapping
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise InputError(f"Cannot read config file {path}: {e}", original_exception=e)

    if not isinstance(data, dict):
        raise InputError(f"Config file {path} must contain a mapping")

    config = {}
    for key, value in data.items():
        key = str(key).replace('-', '_')
        config[key] = _normalize_keys(value) if isinstance(value, dict) else value
    return config


def split_config(config: Dict[str, Any], subcommands: Iterable[str]) -> Tuple[Dict[str, Any], Dict[str, Dict[str, Any]]]:
    """Separate global defaults from per-subcommand sections."""
    sections = {name: config[name] for name in subcommands if isinstance(config.get(name), dict)}
    globals_ = {k: v for k, v in config.items() if k not in sections}
    return globals_, sections


def load_environment(dotenv_path: Optional[str] = None):
    load_dotenv(dotenv_path, override=False)


def resolve_output_path(path: Optional[str]) -> Optional[str]:
    """Prefix relative output paths with HQGEO_OUTPUT_DIR when it is set."""
    if not path:
        return path
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path
