"""Constructors for the quasi-Hamiltonian spaces and their charts."""

from .base import (
    Evaluation,
    Factor,
    OmegaTerm,
    OneForm,
    QHSpace,
    omega_d,
    omega_gram,
    omega_value,
)
from .conjugacy import (
    ClassPoint,
    ConjugacyClass,
    conjugacy_class,
    conjugacy_cover_form,
    conjugacy_intrinsic_form,
)
from .double import DoublePoint, InternallyFusedDouble, double
from .fission import (
    DualGroupPoint,
    FissionPoint,
    FissionSimple,
    FissionSpace,
    StokesChart,
    StokesPoint,
    de_to_stokes,
    dual_group_view,
    fission,
    fission_moment,
    fission_simple,
    omega_alt,
    stokes_moment,
    stokes_to_de,
)
from .fusion import FusedPoint, FusedSpace, fuse
from .groupoid import (
    GroupoidTuple,
    double_fission_space,
    groupoid_residuals,
    groupoid_tuple,
    solve_moment_one_pair,
)

__all__ = [
    "Evaluation", "Factor", "OmegaTerm", "OneForm", "QHSpace",
    "omega_d", "omega_gram", "omega_value",
    "ClassPoint", "ConjugacyClass", "conjugacy_class",
    "conjugacy_cover_form", "conjugacy_intrinsic_form",
    "DoublePoint", "InternallyFusedDouble", "double",
    "DualGroupPoint", "FissionPoint", "FissionSimple", "FissionSpace",
    "StokesChart", "StokesPoint", "de_to_stokes", "dual_group_view",
    "fission", "fission_moment", "fission_simple", "omega_alt",
    "stokes_moment", "stokes_to_de",
    "FusedPoint", "FusedSpace", "fuse",
    "GroupoidTuple", "double_fission_space", "groupoid_residuals",
    "groupoid_tuple", "solve_moment_one_pair",
]
