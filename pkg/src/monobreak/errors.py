"""Error types shared across the pipeline."""


class FatalError(Exception):
    """Unrecoverable input or usage error; the CLI maps it to exit code 1."""


class OpsError(FatalError):
    """Operational-data file is malformed or violates the ops-JSON schema."""
