"""Exact verification kernel for quasi-Hopf algebras and their first
Heisenberg doubles, with the twisted group-algebra family as the worked
class of examples."""

from .scalar import CycScalar, Rational, cyclotomic_polynomial, root_of_unity
from .algebra import (
    Coproduct,
    LinearMap,
    SparseTensor,
    StructureConstants,
    convolution,
    harpoon,
    invert_map,
    leg_embed,
    multiply,
    solve_linear,
)
from .quasihopf import (
    DerivedElements,
    QuasiHopfAlgebra,
    check_quasi_antipode,
    check_quasi_bialgebra,
    compute_qR_pL,
    compute_twist,
    compute_U_Vtilde,
    derive_elements,
)
from .heisenberg import (
    CanonicalElements,
    HeisenbergAlgebra,
    build_H1,
    build_H1_dual,
    canonical_elements,
    check_parenthesization,
    check_theorem_4_4,
    check_theorem_4_5,
    probe_invertibility,
)
from .twisted import (
    Cocycle3,
    FiniteGroup,
    build_k_omega_G,
    check_cocycle,
    closed_form_double,
    closed_form_elements,
    cyclic_cocycle,
    invertibility_criterion,
    klein_cocycle,
    product_cocycle,
    trivial_cocycle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
