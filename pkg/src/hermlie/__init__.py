"""hermlie: exact computation with Hermitian structures on Lie algebras and
their twisted cartesian products."""

from .algebra_core import (
    Endo,
    KForm,
    LieAlgebra,
    abelian,
    basis_one_form,
    ce_d,
    change_basis,
    direct_sum,
    form_text,
    jacobi_defect,
    parse_salamon,
    parse_two_form,
    print_salamon,
    pullback_form,
    wedge,
)
from .expressions import ExpressionError, UnboundParameterError
from .hermitian import (
    ClassFlags,
    Connection,
    HermitianStructure,
    Metric,
    classify,
    codiff2,
    connection_defects,
    fundamental_form,
    lee_form,
    levi_civita,
    metric_from,
    nijenhuis,
)
from .twist import (
    BalancedLCBFlags,
    Defect,
    ProductGateError,
    Representation,
    TwistData,
    adjoint,
    balanced_lcb_test,
    build_example_2p2q,
    build_product,
    character,
    check_commuting,
    check_compatible,
    check_integrability_general,
    check_representation,
    kahler_test,
    lee_via_theorem,
    product_connection,
    product_dw,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
