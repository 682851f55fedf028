from typing import Optional


class ReadlabError(Exception):
    """Base class for data errors surfaced to the CLI with exit code 2."""


class ConfigError(ReadlabError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


class SequenceError(ReadlabError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)
        self.line = line


class DegenerateFeatureError(ReadlabError, ValueError):
    pass


class RankDeficiencyError(ReadlabError, ValueError):
    pass


class DataError(ReadlabError, ValueError):
    pass
