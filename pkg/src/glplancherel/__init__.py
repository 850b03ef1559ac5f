"""Exact Plancherel densities for Bernstein components of GL(n) over a p-adic field."""
from .combinatorics import Partition, Segment, partitions_of
from .errors import (
    DomainError,
    InputError,
    MissingDataError,
    MixedCuspidalError,
    NotProportionalError,
    ParseError,
    PlancherelError,
    SingularityError,
    ValidationError,
)
from .exactalg import FactoredExpr, HalfPowerPoly, RatFunc, exact_eq, parse_scalar, q, v
from .invariants import CuspidalDatum, FundamentalInvariants, iwahori_invariants, validate
from .plancherel import ComponentSpec, DensityReport, density, enumerate_components, integrate, parse_selector
from .transfer import kappa, lambda_DF, transfer_density

__version__ = "0.1.0"
