class ValidationError(ValueError):
    """A space, tensor, norm spec, instance, or document violates its contract."""
