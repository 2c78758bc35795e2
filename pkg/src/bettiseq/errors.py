"""Exception families, one per CLI exit code."""


class BettiseqError(Exception):
    """Base class; every subclass carries a stable CLI exit code."""

    exit_code = 1


class ConfigError(BettiseqError):
    """Bad flags, malformed configuration, missing columns, mixed grids."""

    exit_code = 2


class DataError(BettiseqError):
    """Fatal dataset problems: duplicate ids, invalid sequences, bad files."""

    exit_code = 3


class JoinError(BettiseqError):
    """Record/embedding join failures: missing ids or width mismatches."""

    exit_code = 4


class EngineMismatch(BettiseqError):
    """Fast engine disagreed with the brute-force oracle."""

    exit_code = 5
