"""Weighted mixed norms on finite product spaces, the permutation calculus
that reorders them, and a verified catalog of the inequalities they satisfy.
"""

from .catalog import (
    KINDS,
    InequalityInstance,
    SubsetSystem,
    VerificationReport,
    build_instance,
    check_holder_system,
    evaluate_instance,
    instance_from_doc,
    instance_to_doc,
    size_k_subsets,
    solve_subset_coefficients,
)
from .documents import (
    load_validated,
    space_from_doc,
    space_to_doc,
    tensor_from_csv,
    tensor_from_doc,
    tensor_to_doc,
)
from .errors import ValidationError
from .exponents import (
    INF,
    Exponent,
    as_exponent,
    exponent_str,
    exponent_to_doc,
    harmonic_mean,
    reciprocal,
    to_float,
)
from .perms import (
    OrbitInfo,
    Permutation,
    RaiseStep,
    RaiseTrace,
    all_permutations,
    apply_permutation,
    decompose,
    inversion_count,
    lowers,
    orbit,
    orbit_info,
    raises,
    sorting_permutations,
)
from .search import (
    ScalingProbe,
    SearchResult,
    TrialConfig,
    maximize_ratio,
    random_inputs,
    scaling_probe,
    sweep,
)
from .spaces import (
    Axis,
    NormSpec,
    ProductSpace,
    Tensor,
    eval_mixed_norm,
    geometric_mean,
    integrate_product,
    mixed_norm_log,
)

__version__ = "1.0.0"

__all__ = [
    "Axis",
    "Exponent",
    "INF",
    "InequalityInstance",
    "KINDS",
    "NormSpec",
    "OrbitInfo",
    "Permutation",
    "ProductSpace",
    "RaiseStep",
    "RaiseTrace",
    "ScalingProbe",
    "SearchResult",
    "SubsetSystem",
    "Tensor",
    "TrialConfig",
    "ValidationError",
    "VerificationReport",
    "all_permutations",
    "apply_permutation",
    "as_exponent",
    "build_instance",
    "check_holder_system",
    "decompose",
    "eval_mixed_norm",
    "evaluate_instance",
    "exponent_str",
    "exponent_to_doc",
    "geometric_mean",
    "harmonic_mean",
    "instance_from_doc",
    "instance_to_doc",
    "integrate_product",
    "inversion_count",
    "load_validated",
    "lowers",
    "maximize_ratio",
    "mixed_norm_log",
    "orbit",
    "orbit_info",
    "raises",
    "random_inputs",
    "reciprocal",
    "scaling_probe",
    "size_k_subsets",
    "solve_subset_coefficients",
    "sorting_permutations",
    "space_from_doc",
    "space_to_doc",
    "sweep",
    "tensor_from_csv",
    "tensor_from_doc",
    "tensor_to_doc",
    "to_float",
]
