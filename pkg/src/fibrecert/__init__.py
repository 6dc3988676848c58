"""fibrecert: exact mod-p algebra for loop-space homology of pinch-map
fibres, symmetric-group idempotent images, relative James cell bookkeeping,
and finite abelian p-group exact-sequence arithmetic."""

from .fplinalg import (
    Fp,
    GradedVectorSpace,
    MatrixFp,
    PoincareSeries,
    SparseEchelon,
    kernel_basis,
    ps_free_tensor,
    ps_mul,
    sphere_space,
)
from .tensoralg import (
    TensorAlgebra,
    TensorElement,
    ad_power,
    bracket,
    coproduct,
    coproduct_terms,
    free_on_check,
    is_primitive,
    product,
    subalgebra_dims,
)
from .symring import (
    GroupRingElement,
    Permutation,
    bracket_idempotent,
    dynkin_element,
    idempotent_stable_image,
    koszul_action,
    lie_component,
    ring_mul,
)

__version__ = "0.1.0"
