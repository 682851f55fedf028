import json
import os


def parse_config(path: str) -> dict:
    """
    Parse configuration file and return as a dictionary.
    :param path: Path to the configuration file.
    :return: Configuration as a dictionary.
    """
    assert os.path.exists(path), f"Configuration file {path} does not exist."

    with open(path, "r") as file:
        config = json.load(file)
    config.setdefault("config_dir", os.path.dirname(os.path.abspath(path)))
    return config


def resolve_path(config: dict, path: str) -> str:
    """Resolve a path from the config relative to the config file's directory."""
    if os.path.isabs(path):
        return path
    return os.path.normpath(os.path.join(config.get("config_dir", "."), path))


def env_workers(default: int) -> int:
    value = os.environ.get("READLAB_WORKERS")
    if not value:
        return default
    try:
        return max(1, int(value))
    except ValueError:
        return default
