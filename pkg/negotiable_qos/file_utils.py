"""
File utility functions for goal files and trace output.
"""

import json
import os
from typing import Dict, Iterable, List, Mapping, Tuple

from negotiable_qos.errors import ConfigError


def parse_goal_flag(value: str) -> Tuple[str, str]:
    """
    Splits a '--goals user=path' flag into (user, path).
    A bare path registers its file name (without extension) as the user id.
    """
    if '=' in value:
        user, path = value.split('=', 1)
        user, path = user.strip(), path.strip()
        if not user or not path:
            raise ConfigError(f"Invalid --goals value '{value}'. Expected user=path")
        return user, path
    return get_user_from_path(value), value


def get_user_from_path(file_path: str) -> str:
    """Extracts a user id from a goal file path by dropping the directory and extension."""
    return os.path.splitext(os.path.basename(file_path))[0]


def read_goal_file(path: str) -> str:
    """Reads one user's goal text. Missing files are configuration errors."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except FileNotFoundError:
        raise ConfigError(f"Goal file not found: {path}")


def read_goal_files(goal_paths: Mapping[str, str]) -> Dict[str, str]:
    """Reads every user's goal text from a user -> path mapping."""
    return {user: read_goal_file(path) for user, path in goal_paths.items()}


def write_records(path: str, records: Iterable[dict]) -> int:
    """Writes line-delimited JSON records with sorted keys. Returns the number written."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    count = 0
    with open(path, 'w', encoding='utf-8') as f:
        for record in records:
            f.write(json.dumps(record, sort_keys=True))
            f.write('\n')
            count += 1
    return count


def read_records(path: str) -> List[dict]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return [json.loads(line) for line in f if line.strip()]
    except FileNotFoundError:
        raise ConfigError(f"Trace file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Trace file {path} is not line-delimited JSON: {e}")
