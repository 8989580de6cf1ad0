"""Combinatorial invariants of right-angled Coxeter groups and their Davis complexes."""

from .errors import (LemmaViolation, NotConvexError, NotFlagError, NotPureError, NotSphereError,
                     ParseError, PreconditionError, RacgError, ResourceLimitError)
from .simplicial import FlagComplex, SimplicialComplex

__version__ = "0.1.0"
