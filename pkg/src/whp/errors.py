"""Exception types raised by the library."""


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    def __init__(self, i, j, deviation):
        self.i, self.j, self.deviation = i, j, deviation
        super().__init__(f"matrix not Hermitian: |a[{i},{j}] - conj(a[{j},{i}])| = {deviation:.3e}")


class NotPSDError(ValueError):
    pass


class SimplexError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


class NodeCoalescenceError(ValueError):
    """Divided-difference formulas need strictly separated nodes."""


class DegenerateClassError(AttributeError):
    """Requested a rescaled eigenvalue class that is empty for these dimensions."""
