"""Quasi-Hamiltonian spaces over GL_n(C) with numerically verified axioms."""

from .groups import (
    AlgebraElement,
    CartanElement,
    GroupContext,
    GroupElement,
    cartan_regularity,
    delta_borel,
    delta_cartan,
    epsilon,
    trace_form,
)
from .spaces import (
    conjugacy_class,
    double,
    double_fission_space,
    de_to_stokes,
    dual_group_view,
    fission,
    fission_simple,
    fuse,
    groupoid_tuple,
    omega_alt,
    omega_d,
    omega_gram,
    omega_value,
    solve_moment_one_pair,
    stokes_to_de,
)
from .verify import (
    CheckReport,
    check_equivariance,
    check_invariance,
    check_qh1,
    check_qh2,
    check_qh3,
    check_reduction,
)

__version__ = "0.1.0"
