"""Exception hierarchy.

Two families matter to callers: ordinary errors (bad input, divergent
series, truncation caps) and *refusals*, raised when an identity cannot be
tested in double precision at the requested point (near a theta zero, or an
ill-conditioned inverse).  Suites report refusals as a third status.
"""


class WqpError(Exception):
    pass


class ParameterError(WqpError, ValueError):
    """One or more parameter bounds are violated.

    ``violations`` holds the short names of the failed bounds, e.g.
    ``["|q|>=1"]``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(", ".join(self.violations))


class DegenerateParameterError(WqpError, ValueError):
    pass


class DivergenceError(WqpError, ValueError):
    pass


class TruncationError(WqpError, RuntimeError):
    pass


class ConvergenceError(WqpError, RuntimeError):
    pass


class Refusal(WqpError):
    pass


class NearPoleError(Refusal):
    def __init__(self, what, point=None):
        self.what = what
        self.point = point
        msg = what if point is None else f"{what} at {point!r}"
        super().__init__(msg)


class SingularMatrixError(Refusal):
    def __init__(self, cond, what="matrix"):
        self.cond = cond
        super().__init__(f"{what} is ill-conditioned (cond={cond:.3e})")


class LegLimitError(Refusal):
    pass
