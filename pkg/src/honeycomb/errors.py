"""Exception types shared by all modules."""


class HoneycombError(Exception):
    """Base class for every error raised by the package."""


class InvalidArgument(HoneycombError, ValueError):
    pass


class DegenerateGeometry(HoneycombError, ValueError):
    """A polygon collapsed to (near) zero area or lost its convexity."""


class SolverFailure(HoneycombError, RuntimeError):
    pass


class Unsupported(HoneycombError, NotImplementedError):
    """No evaluation method exists for the requested functional/shape pair."""

    def __init__(self, kind, shape="", detail=""):
        self.kind = kind
        self.shape = shape
        msg = f"{kind} is unsupported"
        if shape:
            msg += f" on {shape}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class GrowthIncomplete(HoneycombError, RuntimeError):
    """Cluster growth ended with sides that touch nothing."""

    def __init__(self, free_sides):
        self.free_sides = list(free_sides)
        super().__init__(f"{len(self.free_sides)} free side(s) after growth: {self.free_sides[:5]}")
