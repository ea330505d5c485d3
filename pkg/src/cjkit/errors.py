"""Exception hierarchy shared by every cjkit module."""


class CJError(Exception):
    """Base class for all errors raised by cjkit."""


class InvalidArgument(CJError, ValueError):
    pass


class TooLarge(CJError):
    def __init__(self, size: int, limit: int, what: str = "world set"):
        self.size = size
        self.limit = limit
        super().__init__(f"{what} has {size} worlds; the limit is {limit}")


class EmptyWorldSet(CJError):
    def __init__(self):
        super().__init__("a model needs at least one world")


class FrameViolation(CJError):
    """Raised when ``w in av(w) <= pv(w)`` fails for some world."""

    def __init__(self, world: str, reason: str):
        self.world = world
        self.reason = reason
        super().__init__(f"frame condition fails at {world}: {reason}")


class UnknownAtom(CJError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self):
        return f"unknown atom {self.name!r}"


class FormulaSyntaxError(CJError):
    def __init__(self, position: int, expected: str, text: str = ""):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"at position {position}: expected {expected}")


class UnknownToken(FormulaSyntaxError):
    def __init__(self, position: int, text: str = ""):
        super().__init__(position, "a valid token", text)
        self.args = (f"at position {position}: unknown token {text[position:position + 8]!r}",)


class DisjointSeed(CJError):
    def __init__(self, consequent: int, antecedent: int):
        self.consequent = consequent
        self.antecedent = antecedent
        super().__init__(
            "cannot make a conditional obligation whose consequent and "
            "antecedent are disjoint"
        )


class IterationLimit(CJError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"closure did not stabilise within {limit} sweeps")


class ScenarioSyntaxError(CJError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UndeclaredWorld(CJError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}world {name!r} is not declared")


class UndeclaredAtom(CJError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}atom {name!r} is not declared")


class UnknownFixture(CJError):
    def __init__(self, name: str, known):
        self.name = name
        super().__init__(f"unknown fixture {name!r}; choose from {', '.join(known)}")
