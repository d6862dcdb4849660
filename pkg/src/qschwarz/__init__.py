"""Numerical verification of the comoving dust solution of the coupled
Einstein / statistical-field system, its Robertson-Walker reading, and the
energy ledgers of the Atwood-machine thought experiments."""

from .dust import DustSolution, amplitude, density, metric_of, verify_family
from .errors import (
    DivisionByZero,
    DomainError,
    ExprSyntaxError,
    SingularMetric,
    SingularPoint,
    UnknownIdentifier,
    UnphysicalShift,
)
from .geometry import MetricAnsatz, dalembertian, einstein_tensor, explicit_residuals
from .jets import Jet2
from .profiles import Profile, parse

__version__ = "0.1.0"
