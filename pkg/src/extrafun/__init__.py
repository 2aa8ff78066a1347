"""Extrafunctions over seminorm families.

Function sequences are identified when every seminorm of a family sends their
difference to zero.  The package provides the expression language, probe
realizations of seminorm families, windowed equivalence decisions, the
neighbourhood topologies, and sections with their sectional derivatives.
"""
from . import bundle, checks, expr, hyperspace, seminorm, topology
from .bundle import (BasisLinearSection, PatchedSection, RepSection,
                     SmoothingSection, conjugate_ad, conjugate_mt,
                     lift_partial_derivative, section_apply,
                     sectional_derivative)
from .errors import (DomainError, ExprSyntaxError, ExtrafunError,
                     FamilyMismatch, NotSeparable, OutOfDomain,
                     PreconditionViolation, ShapeError, UndefinedDerivative,
                     ZeroScalar)
from .expr import differentiate, eval_expr, evaluate, parse, simplify
from .hyperspace import (Decision, ExprSeq, HyperElement, ListSeq, Verdict,
                         Window, ec, embed, ep, equivalent, hn, null_check,
                         project)
from .seminorm import absolute, compact_sup, pointwise, test_integral

__version__ = "0.1.0"
