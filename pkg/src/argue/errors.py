"""Exception hierarchy shared by every module."""


class ArgueError(Exception):
    pass


class ParseError(ArgueError):
    """Malformed formula, sign or knowledge-base text."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)


class DatabaseError(ArgueError):
    """Duplicate labels, or signs that do not belong to the declared dictionary."""


class SignError(ArgueError):
    """A sign used with a dictionary it does not belong to."""


class UnboundVariableError(ArgueError):
    pass


class FragmentError(ArgueError):
    """Query outside what the prover searches (non-ground goal, disjunction)."""


class ProofError(ArgueError):
    """A proof term that does not follow the inference rules."""

    def __init__(self, message, path=()):
        self.path = tuple(path)
        self.message = message
        where = "/".join(["root", *map(str, self.path)])
        super().__init__(f"{message} at {where}")


class AggregationError(ArgueError):
    pass
