"""Exception hierarchy."""


class G2SpectralError(Exception):
    """Base class for all package errors."""


class NumericalRankError(G2SpectralError):
    pass


class FramePreconditionError(G2SpectralError, ValueError):
    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"frame precondition violated: {name} = {value:.3e}")


class DegenerateOrbitError(G2SpectralError, ValueError):
    """The 3-form has kappa = 0, so no metric is induced."""


class SplitDegenerateError(G2SpectralError, ValueError):
    """s(alpha) vanishes, so K has no +/- eigenspace splitting."""


class PoleError(G2SpectralError, ValueError):
    """Evaluation of a Laurent loop at zeta = 0."""


class GaugeFailureError(G2SpectralError):
    """The C_zeta gauge does not remove the zeta dependence beyond lambda = zeta^6."""


class InterpolationError(G2SpectralError):
    def __init__(self, message, condition_number):
        self.condition_number = condition_number
        super().__init__(f"{message} (condition number {condition_number:.3e})")


class NotG2FieldError(G2SpectralError):
    """Characteristic polynomial does not have the shape of a g2 element."""


class SymmetryViolationError(G2SpectralError):
    """Coefficients outside 6Z or otherwise breaking the tau symmetry."""


class CountMismatchError(G2SpectralError):
    """Branch-counted invariants disagree with the closed formulas."""


class DegenerateCurveError(G2SpectralError, ValueError):
    """The curve equation is degenerate (resultant identically zero without a singular witness)."""


class OffCurveError(G2SpectralError, ValueError):
    pass


class StiffnessError(G2SpectralError):
    def __init__(self, message, last_state):
        self.last_state = last_state
        super().__init__(message)


class BranchPointProximityError(G2SpectralError):
    """Eigenvalues too close to separate eigenlines reliably."""


class CalibrationError(G2SpectralError):
    pass


class FieldFileError(G2SpectralError):
    """Base for field-file parse errors."""


class MalformedFileError(FieldFileError):
    pass


class ShapeError(FieldFileError):
    pass


class RangeError(FieldFileError):
    pass


class RealityViolationError(FieldFileError):
    def __init__(self, j, residual):
        self.j = j
        self.residual = residual
        super().__init__(f"A_{{-{j}}} != conj(A_{j}) for j={j} (residual {residual:.3e})")


class GradingViolationError(FieldFileError):
    def __init__(self, j, residual):
        self.j = j
        self.residual = residual
        super().__init__(f"A_{j} is not in g_{j % 6} (residual {residual:.3e})")
