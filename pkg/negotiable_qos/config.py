import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import yaml

from negotiable_qos.errors import ConfigError

REQUIRED_KEYS = [
    "model",
]

OPTIONAL_KEYS = [
    "goals",
    "scenario",
    "seed",
    "out",
    "report",
    "std_log_path",
    "err_log_path",
]

REPORT_FORMATS = ("table", "records")


def load_config(path):
    try:
        with open(path, "r") as f:
            config = yaml.safe_load(f)
    except Exception as e:
        raise ConfigError(f"Failed to load config file: {e}")

    if not isinstance(config, dict):
        raise ConfigError("Config file must be a YAML dictionary.")

    # Check for missing required keys
    missing = [k for k in REQUIRED_KEYS if k not in config]
    if missing:
        raise ConfigError(f"Missing required config keys: {', '.join(missing)}")

    # Check for unexpected keys and warn
    unexpected_keys = set(config.keys()) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS)
    for key in sorted(unexpected_keys):
        warnings.warn(f"Unexpected config key '{key}' found in config file. This key will be ignored.", UserWarning)

    if config.get("goals") is not None and not isinstance(config["goals"], dict):
        raise ConfigError("'goals' must map user ids to goal file paths.")
    if config.get("report", "table") not in REPORT_FORMATS:
        raise ConfigError(f"'report' must be one of: {', '.join(REPORT_FORMATS)}")

    return config


@dataclass
class RunConfiguration:
    """Everything one run needs. Goal paths are keyed by user id."""
    model_path: str
    goal_paths: Dict[str, str] = field(default_factory=dict)
    scenario_path: Optional[str] = None
    seed: int = 0
    output_path: Optional[str] = None
    report_format: str = "table"
    std_log_path: str = ""
    err_log_path: str = ""

    @classmethod
    def from_sources(cls, config: Optional[Dict[str, Any]], overrides: Dict[str, Any]) -> "RunConfiguration":
        """Merges a loaded config file with command-line values; command-line values win."""
        config = config or {}
        goal_paths = {str(k): str(v) for k, v in (config.get("goals") or {}).items()}
        goal_paths.update(overrides.get("goal_paths") or {})

        def pick(override_key, config_key, default=None):
            value = overrides.get(override_key)
            return value if value is not None else config.get(config_key, default)

        model_path = pick("model_path", "model")
        if not model_path:
            raise ConfigError("A model file is required (--model or 'model' in the config file).")
        try:
            seed = int(pick("seed", "seed", 0))
        except (TypeError, ValueError):
            raise ConfigError("'seed' must be an integer.")
        report_format = pick("report_format", "report", "table")
        if report_format not in REPORT_FORMATS:
            raise ConfigError(f"'report' must be one of: {', '.join(REPORT_FORMATS)}")
        return cls(
            model_path=str(model_path),
            goal_paths=goal_paths,
            scenario_path=pick("scenario_path", "scenario"),
            seed=seed,
            output_path=pick("output_path", "out"),
            report_format=report_format,
            std_log_path=str(config.get("std_log_path", "") or ""),
            err_log_path=str(config.get("err_log_path", "") or ""),
        )
