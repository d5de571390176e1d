"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the range where a formula or construction is defined."""


class ResourceError(RuntimeError):
    """A requested computation exceeds the configured resource guard."""
