class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateError(ValueError):
    """A closed form was requested at a parameter where it degenerates."""
