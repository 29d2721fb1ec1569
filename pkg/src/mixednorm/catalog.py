"""A catalog of mixed-norm inequalities with exact derived exponents.

Each instance pins down one inequality over named axes: a left-hand side
(a product integral, an L^p norm of a geometric mean, or a single mixed
norm), a list of right-hand-side mixed norms with rational weights, and the
exact rational data (harmonic means, complementary exponents, subset
coefficients) that the inequality needs.  Instances are built from plain
parameter dicts, serialize to {"kind", "params", "derived"} documents, and
are re-derived and cross-checked on load.

Kinds
-----
HolderMixed         product integral vs product of mixed norms, reciprocal
                    exponents summing to 1 on every axis
MinkowskiRaise      single mixed norm vs its raised (or lowered) rearrangement
SortedSandwich      norm squeezed between its ascending and descending sorts
SymmetricHolder     L^pbar norm of a geometric mean vs the exponent-row orbit
SymmetricGM         same with the variable-row orbit (sorted exponents)
SymmetricGM1        single-function case of SymmetricGM
Littlewood43        SymmetricGM1 at exponents (2, 1): the 4/3 inequality
Blei21              exponent rows of 2s and 1s indexed by K-subsets
BleiQP              exponent rows of qs and ps indexed by K-subsets
PopaSinnamonFirst   n functions, inner exponent q_j over the other axes
PopaSinnamonSecond  n functions, inner exponent q_j over the own axis
BleiPS              subset-indexed family with coefficients c_i solving
                    sum_{S_i ∋ j} c_i = 1
Quad6               the fixed n=4, k=2, q=12 instance of BleiPS (six factors)
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import ValidationError
from .exponents import (
    INF,
    Exponent,
    _Infinity,
    as_exponent,
    exponent_str,
    exponent_to_doc,
    reciprocal,
    to_float,
)
from .perms import (
    Permutation,
    apply_permutation,
    inversion_count,
    lowers,
    orbit,
    orbit_info,
    raises,
    sorting_permutations,
)
from .spaces import (
    NormSpec,
    Tensor,
    integrate_product_log,
    log_values,
    mixed_norm_log,
    mixed_norm_log_values,
)

KINDS = (
    "HolderMixed",
    "MinkowskiRaise",
    "SortedSandwich",
    "SymmetricHolder",
    "SymmetricGM",
    "SymmetricGM1",
    "Littlewood43",
    "Blei21",
    "BleiQP",
    "PopaSinnamonFirst",
    "PopaSinnamonSecond",
    "BleiPS",
    "Quad6",
)

_RESIDUAL_TOL = 1e-12


def check_holder_system(specs) -> tuple[bool, dict[str, Fraction]]:
    """Do the reciprocal exponents sum to 1 on every axis?

    Returns (ok, residuals) where residuals[axis] = sum_i 1/p_{i,axis} - 1,
    exact rationals.  ok is True when every residual is 0 or within 1e-12
    (float-derived exponents carry their binary values exactly, so a system
    assembled from rationals must balance exactly to pass as exact).
    """
    if not specs:
        raise ValidationError("empty norm spec list")
    axis_set = set(specs[0].axis_ids)
    for s in specs[1:]:
        if set(s.axis_ids) != axis_set:
            raise ValidationError(
                f"norm specs cover different axes: {sorted(axis_set)} vs {sorted(s.axis_ids)}"
            )
    residuals = {}
    for aid in sorted(axis_set):
        total = sum((reciprocal(s.exponent_for(aid)) for s in specs), Fraction(0))
        residuals[aid] = total - 1
    ok = all(abs(r) <= _RESIDUAL_TOL for r in residuals.values())
    return ok, residuals


def size_k_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-subsets of {1..n} in lexicographic order."""
    if not 0 < k < n:
        raise ValidationError(f"need 0 < k < n, got k={k}, n={n}")
    return list(combinations(range(1, n + 1), k))


def _validate_coefficients(n, k, subsets, coeffs):
    if len(coeffs) != len(subsets):
        raise ValidationError(f"need {len(subsets)} coefficients, got {len(coeffs)}")
    for i, c in enumerate(coeffs):
        if c < 0:
            raise ValidationError(f"coefficient c_{i + 1} = {c} is negative")
    exact = all(isinstance(c, (Fraction, int)) for c in coeffs)
    for j in range(1, n + 1):
        total = sum(c for c, s in zip(coeffs, subsets) if j in s)
        residual = total - 1
        if exact:
            if residual != 0:
                raise ValidationError(
                    f"coefficients do not cover axis {j}: sum is {total}, want 1"
                )
        elif abs(residual) > _RESIDUAL_TOL:
            raise ValidationError(
                f"coefficients do not cover axis {j}: residual {float(residual):.3e}"
            )


def solve_subset_coefficients(
    n: int, k: int, strategy: str = "uniform", seed: int | None = None, coefficients=None
):
    """Nonnegative c_i over the k-subsets of {1..n} with sum_{S_i ∋ j} c_i = 1.

    strategy 'uniform' returns the exact 1/binom(n-1, k-1) point;
    'random' (alias 'seeded-random-feasible') adds a seeded direction from
    the null space of the incidence constraints, scaled to stay nonnegative;
    'user' (alias 'user-supplied') validates the supplied coefficients.
    """
    subsets = size_k_subsets(n, k)
    strategy = {"seeded-random-feasible": "random", "user-supplied": "user"}.get(
        strategy, strategy
    )
    if strategy == "uniform":
        c = Fraction(1, math.comb(n - 1, k - 1))
        return tuple(c for _ in subsets)
    if strategy == "user":
        if coefficients is None:
            raise ValidationError("user strategy needs explicit coefficients")
        coeffs = []
        for v in coefficients:
            if isinstance(v, str) or isinstance(v, int):
                coeffs.append(Fraction(v))
            elif isinstance(v, Fraction):
                coeffs.append(v)
            else:
                coeffs.append(float(v))
        _validate_coefficients(n, k, subsets, coeffs)
        return tuple(coeffs)
    if strategy == "random":
        if seed is None:
            raise ValidationError("random strategy needs a seed")
        uniform = np.full(len(subsets), 1.0 / math.comb(n - 1, k - 1))
        incidence = np.zeros((n, len(subsets)))
        for i, s in enumerate(subsets):
            for j in s:
                incidence[j - 1, i] = 1.0
        # orthonormal null-space basis of the incidence constraints
        _, sing, vt = np.linalg.svd(incidence)
        rank = int(np.sum(sing > 1e-12 * sing[0]))
        null_basis = vt[rank:]
        if null_basis.shape[0] == 0:
            return tuple(Fraction(1, math.comb(n - 1, k - 1)) for _ in subsets)
        rng = np.random.default_rng([int(seed), 0x5EED])
        direction = null_basis.T @ (null_basis @ rng.standard_normal(len(subsets)))
        peak = np.max(np.abs(direction))
        if peak < 1e-12:
            return tuple(Fraction(1, math.comb(n - 1, k - 1)) for _ in subsets)
        direction /= peak
        negative = direction < 0
        step_cap = np.min(uniform[negative] / -direction[negative]) if negative.any() else 1.0
        c = uniform + 0.5 * step_cap * direction
        c = np.maximum(c, 0.0)
        coeffs = tuple(float(v) for v in c)
        _validate_coefficients(n, k, subsets, coeffs)
        return coeffs
    raise ValidationError(f"unknown coefficient strategy {strategy!r}")


@dataclass(frozen=True)
class SubsetSystem:
    """The combinatorial data behind the subset-indexed inequalities."""

    n: int
    k: int
    subsets: tuple[tuple[int, ...], ...]
    c: tuple
    q: tuple | None = None
    epsilon: Fraction | None = None

    def __post_init__(self):
        expected = size_k_subsets(self.n, self.k)
        if list(self.subsets) != expected:
            raise ValidationError("subsets must be the k-subsets of {1..n} in lex order")
        _validate_coefficients(self.n, self.k, self.subsets, self.c)
        if self.epsilon is not None and self.epsilon < 0:
            raise ValidationError(f"epsilon = {self.epsilon} is negative")
        if self.q is not None and self.epsilon is not None:
            balance = sum((reciprocal(e) for e in self.q), Fraction(0)) + self.epsilon
            if balance != 1:
                raise ValidationError("1/q sum plus epsilon must equal 1 exactly")

    def to_doc(self) -> dict:
        doc = {
            "n": self.n,
            "k": self.k,
            "subsets": [list(s) for s in self.subsets],
            "c": [_rational_doc(v) for v in self.c],
            "c_float": [float(v) for v in self.c],
        }
        if self.q is not None:
            doc["q"] = [exponent_to_doc(e) for e in self.q]
        if self.epsilon is not None:
            doc["epsilon"] = _rational_doc(self.epsilon)
            doc["epsilon_float"] = float(self.epsilon)
        return doc


def _rational_doc(v):
    if isinstance(v, Fraction):
        return str(v)
    return float(v)


@dataclass(frozen=True)
class RhsFactor:
    spec: NormSpec
    weight: Fraction  # the norm enters the right-hand side raised to this power
    input_index: int  # which input tensor the norm applies to


@dataclass(frozen=True)
class InequalityInstance:
    """One concrete inequality: lhs(tensors) <= prod_i ||f_(idx_i)||_{spec_i}^{w_i}."""

    kind: str
    axis_ids: tuple[str, ...]
    arity: int
    lhs_form: str  # 'product_integral' | 'gm_lp_norm' | 'mixed_norm'
    lhs_exponent: Exponent | None
    lhs_spec: NormSpec | None
    rhs: tuple[RhsFactor, ...]
    sandwich_lower: NormSpec | None
    params: dict
    derived: dict


@dataclass(frozen=True)
class VerificationReport:
    lhs: float
    rhs: float
    ratio: float
    margin: float
    passed: bool
    hard_failure: bool
    tolerance: float
    seed: int | None
    trial: dict

    def to_doc(self) -> dict:
        return {
            "lhs": _float_doc(self.lhs),
            "rhs": _float_doc(self.rhs),
            "ratio": _float_doc(self.ratio),
            "margin": _float_doc(self.margin),
            "pass": self.passed,
            "hard_failure": self.hard_failure,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "trial": {
                k: _float_doc(v) if isinstance(v, float) else v
                for k, v in self.trial.items()
            },
        }


def _float_doc(x: float):
    # keep emitted documents strict JSON: non-finite floats become strings
    return float(x) if math.isfinite(x) else str(x)


# ---------------------------------------------------------------------------
# builders

def _default_axes(n: int, given=None) -> tuple[str, ...]:
    if given is None:
        return tuple(f"x{i}" for i in range(1, n + 1))
    axes = tuple(str(a) for a in given)
    if len(axes) != n:
        raise ValidationError(f"expected {n} axis ids, got {len(axes)}")
    if len(set(axes)) != n:
        raise ValidationError(f"duplicate axis ids: {list(axes)}")
    return axes


def _exp_pair(e: Exponent) -> tuple[str, float]:
    return exponent_str(e), to_float(e)


def _spec_from_params(params, key="spec") -> NormSpec:
    if key not in params:
        raise ValidationError(f"missing parameter {key!r}")
    doc = params[key]
    if isinstance(doc, NormSpec):
        return doc
    return NormSpec.from_doc(doc)


def _gm_builder(kind, spec, mode, multi_input, params_norm, params):
    """Shared construction for the geometric-mean family."""
    info = orbit_info(spec)
    orbit_specs = orbit(spec, mode)
    m = info.size
    pbar = info.harmonic_mean
    override = params.get("lhs_exponent")
    lhs_e = as_exponent(override) if override is not None else pbar
    perturbed = lhs_e != pbar
    arity = m if multi_input else 1
    rhs = tuple(
        RhsFactor(s, Fraction(1, m), i if multi_input else 0)
        for i, s in enumerate(orbit_specs)
    )
    pbar_s, pbar_f = _exp_pair(pbar)
    derived = {
        "pbar": pbar_s,
        "pbar_float": pbar_f,
        "m": m,
        "orbit": [s.to_doc() for s in orbit_specs],
    }
    if perturbed:
        derived["perturbed"] = True
        params_norm["lhs_exponent"] = exponent_str(lhs_e)
    return InequalityInstance(
        kind=kind,
        axis_ids=spec.axis_ids,
        arity=arity,
        lhs_form="gm_lp_norm",
        lhs_exponent=lhs_e,
        lhs_spec=None,
        rhs=rhs,
        sandwich_lower=None,
        params=params_norm,
        derived=derived,
    )


def _build_symmetric_holder(params):
    spec = _spec_from_params(params)
    return _gm_builder(
        "SymmetricHolder", spec, "exponents", True, {"spec": spec.to_doc()}, params
    )


def _build_symmetric_gm(params):
    spec = _spec_from_params(params)
    if not spec.is_nonincreasing():
        raise ValidationError("SymmetricGM needs exponents sorted nonincreasing")
    return _gm_builder("SymmetricGM", spec, "variables", True, {"spec": spec.to_doc()}, params)


def _build_symmetric_gm1(params):
    spec = _spec_from_params(params)
    if not spec.is_nonincreasing():
        raise ValidationError("SymmetricGM1 needs exponents sorted nonincreasing")
    return _gm_builder("SymmetricGM1", spec, "variables", False, {"spec": spec.to_doc()}, params)


def _build_littlewood43(params):
    axes = _default_axes(2, params.get("axes"))
    spec = NormSpec(((Fraction(2), axes[0]), (Fraction(1), axes[1])))
    inst = _gm_builder("Littlewood43", spec, "variables", False, {"axes": list(axes)}, params)
    return inst


def _subset_specs(axes, subsets, inner_exp, outer_exps):
    """One spec per subset: inner_exp over the complement, outer over the subset."""
    specs = []
    for s, outer_e in zip(subsets, outer_exps):
        inner = [(inner_exp, axes[j - 1]) for j in range(1, len(axes) + 1) if j not in s]
        outer = [(outer_e, axes[j - 1]) for j in s]
        specs.append(NormSpec(tuple(inner + outer)))
    return specs


def _build_subset_gm(kind, J, K, q, p, axes, params_norm, params):
    """Blei21 / BleiQP: single function, orbit indexed by the K-subsets."""
    if not (isinstance(J, int) and isinstance(K, int)):
        raise ValidationError("J and K must be integers")
    if not 0 < K < J:
        raise ValidationError(f"need 0 < K < J, got K={K}, J={J}")
    if not p < q:
        raise ValidationError(f"need p < q, got p={exponent_str(p)}, q={exponent_str(q)}")
    if isinstance(p, _Infinity):
        raise ValidationError("p must be finite")
    axes = _default_axes(J, axes)
    subsets = size_k_subsets(J, K)
    specs = _subset_specs(axes, subsets, q, [p] * len(subsets))
    row = [q] * (J - K) + [p] * K
    info = orbit_info(NormSpec(tuple(zip(row, axes))))
    pbar = info.harmonic_mean
    if info.size != len(subsets):
        raise ValidationError("internal: orbit size disagrees with subset count")
    m = len(subsets)
    pbar_s, pbar_f = _exp_pair(pbar)
    override = params.get("lhs_exponent")
    lhs_e = as_exponent(override) if override is not None else pbar
    derived = {
        "pbar": pbar_s,
        "pbar_float": pbar_f,
        "m": m,
        "subsets": [list(s) for s in subsets],
        "orbit": [s.to_doc() for s in specs],
    }
    if lhs_e != pbar:
        derived["perturbed"] = True
        params_norm["lhs_exponent"] = exponent_str(lhs_e)
    return InequalityInstance(
        kind=kind,
        axis_ids=axes,
        arity=1,
        lhs_form="gm_lp_norm",
        lhs_exponent=lhs_e,
        lhs_spec=None,
        rhs=tuple(RhsFactor(s, Fraction(1, m), 0) for s in specs),
        sandwich_lower=None,
        params=params_norm,
        derived=derived,
    )


def _build_blei21(params):
    J, K = params.get("J"), params.get("K")
    axes = params.get("axes")
    params_norm = {"J": J, "K": K}
    if axes is not None:
        params_norm["axes"] = [str(a) for a in axes]
    return _build_subset_gm(
        "Blei21", J, K, Fraction(2), Fraction(1), axes, params_norm, params
    )


def _build_blei_qp(params):
    J, K = params.get("J"), params.get("K")
    q = as_exponent(params.get("q"))
    p = as_exponent(params.get("p"))
    axes = params.get("axes")
    params_norm = {"J": J, "K": K, "q": exponent_to_doc(q), "p": exponent_to_doc(p)}
    if axes is not None:
        params_norm["axes"] = [str(a) for a in axes]
    return _build_subset_gm("BleiQP", J, K, q, p, axes, params_norm, params)


def _build_holder_mixed(params):
    if "specs" not in params or not isinstance(params["specs"], list):
        raise ValidationError("HolderMixed needs a 'specs' list")
    specs = [s if isinstance(s, NormSpec) else NormSpec.from_doc(s) for s in params["specs"]]
    ok, residuals = check_holder_system(specs)
    if not ok:
        bad = {a: str(r) for a, r in residuals.items() if r != 0}
        raise ValidationError(f"reciprocal exponents do not sum to 1: residuals {bad}")
    return InequalityInstance(
        kind="HolderMixed",
        axis_ids=specs[0].axis_ids,
        arity=len(specs),
        lhs_form="product_integral",
        lhs_exponent=None,
        lhs_spec=None,
        rhs=tuple(RhsFactor(s, Fraction(1), i) for i, s in enumerate(specs)),
        sandwich_lower=None,
        params={"specs": [s.to_doc() for s in specs]},
        derived={"m": len(specs), "residuals": {a: str(r) for a, r in residuals.items()}},
    )


def _build_minkowski_raise(params):
    spec = _spec_from_params(params)
    perm_doc = params.get("perm")
    perm = perm_doc if isinstance(perm_doc, Permutation) else Permutation.from_doc(perm_doc)
    direction = params.get("direction", "raise")
    if direction not in ("raise", "lower"):
        raise ValidationError(f"direction must be 'raise' or 'lower', got {direction!r}")
    predicate = raises if direction == "raise" else lowers
    if not predicate(perm, spec):
        raise ValidationError(f"permutation {list(perm.images)} does not {direction} the spec")
    permuted = apply_permutation(spec, perm, "both")
    if direction == "raise":
        lhs_spec, rhs_spec = spec, permuted
    else:
        lhs_spec, rhs_spec = permuted, spec
    return InequalityInstance(
        kind="MinkowskiRaise",
        axis_ids=spec.axis_ids,
        arity=1,
        lhs_form="mixed_norm",
        lhs_exponent=None,
        lhs_spec=lhs_spec,
        rhs=(RhsFactor(rhs_spec, Fraction(1), 0),),
        sandwich_lower=None,
        params={"spec": spec.to_doc(), "perm": perm.to_doc(), "direction": direction},
        derived={
            "inversions": inversion_count(perm),
            "permuted": permuted.to_doc(),
        },
    )


def _build_sorted_sandwich(params):
    spec = _spec_from_params(params)
    desc, asc = sorting_permutations(spec)
    upper = apply_permutation(spec, desc, "both")
    lower = apply_permutation(spec, asc, "both")
    return InequalityInstance(
        kind="SortedSandwich",
        axis_ids=spec.axis_ids,
        arity=1,
        lhs_form="mixed_norm",
        lhs_exponent=None,
        lhs_spec=spec,
        rhs=(RhsFactor(upper, Fraction(1), 0),),
        sandwich_lower=lower,
        params={"spec": spec.to_doc()},
        derived={
            "raising": desc.to_doc(),
            "lowering": asc.to_doc(),
            "upper": upper.to_doc(),
            "lower": lower.to_doc(),
        },
    )


def _popa_sinnamon_exponents(qs):
    total = sum((reciprocal(e) for e in qs), Fraction(0))
    if total > 1:
        raise ValidationError(f"reciprocal q sum {total} exceeds 1")
    return total, 1 - total


def _build_popa_sinnamon(kind, params):
    if "q" not in params or not isinstance(params["q"], list):
        raise ValidationError(f"{kind} needs a 'q' list")
    qs = [as_exponent(v) for v in params["q"]]
    n = len(qs)
    if n < 2:
        raise ValidationError(f"{kind} needs at least two exponents")
    axes = _default_axes(n, params.get("axes"))
    total, gap = _popa_sinnamon_exponents(qs)
    derived_key = "p" if kind == "PopaSinnamonFirst" else "s"
    outer_exps = []
    specs = []
    for j in range(n):
        if kind == "PopaSinnamonFirst":
            r = reciprocal(qs[j]) + gap
        else:
            r = reciprocal(qs[j]) + gap / (n - 1)
        e = INF if r == 0 else 1 / r
        outer_exps.append(e)
        others = [axes[t] for t in range(n) if t != j]
        if kind == "PopaSinnamonFirst":
            cols = [(qs[j], a) for a in others] + [(e, axes[j])]
        else:
            cols = [(qs[j], axes[j])] + [(e, a) for a in others]
        specs.append(NormSpec(tuple(cols)))
    notes = []
    inf_count = sum(1 for e in qs if isinstance(e, _Infinity))
    if kind == "PopaSinnamonSecond" and inf_count >= n - 1:
        notes.append(f"{inf_count} of {n} exponents are infinite")
    params_norm = {"q": [exponent_to_doc(e) for e in qs]}
    if params.get("axes") is not None:
        params_norm["axes"] = list(axes)
    derived = {
        derived_key: [exponent_str(e) for e in outer_exps],
        derived_key + "_float": [to_float(e) for e in outer_exps],
        "sum_recip_q": str(total),
        "gap": str(gap),
    }
    if notes:
        derived["notes"] = notes
    return InequalityInstance(
        kind=kind,
        axis_ids=axes,
        arity=n,
        lhs_form="product_integral",
        lhs_exponent=None,
        lhs_spec=None,
        rhs=tuple(RhsFactor(s, Fraction(1), i) for i, s in enumerate(specs)),
        sandwich_lower=None,
        params=params_norm,
        derived=derived,
    )


def _build_blei_ps(params, kind="BleiPS"):
    n, k = params.get("n"), params.get("k")
    if not (isinstance(n, int) and isinstance(k, int) and 0 < k < n):
        raise ValidationError(f"need integers 0 < k < n, got k={k!r}, n={n!r}")
    subsets = size_k_subsets(n, k)
    m = len(subsets)
    if "q" not in params or not isinstance(params["q"], list) or len(params["q"]) != m:
        raise ValidationError(f"{kind} needs a 'q' list of length {m}")
    qs = [as_exponent(v) for v in params["q"]]
    total = sum((reciprocal(e) for e in qs), Fraction(0))
    epsilon = 1 - total
    if epsilon < 0:
        raise ValidationError(f"reciprocal q sum {total} exceeds 1")
    axes = _default_axes(n, params.get("axes"))
    if "c" in params and params["c"] is not None:
        coeffs = solve_subset_coefficients(n, k, "user", coefficients=params["c"])
        c_params = {"c": [_rational_doc(c) for c in coeffs]}
    else:
        strategy = params.get("strategy", "uniform")
        seed = params.get("seed")
        coeffs = solve_subset_coefficients(n, k, strategy, seed=seed)
        c_params = {"strategy": strategy}
        if seed is not None:
            c_params["seed"] = seed
    outer = []
    for q_i, c_i in zip(qs, coeffs):
        r = reciprocal(q_i) + (c_i * epsilon if isinstance(c_i, Fraction) else Fraction(c_i) * epsilon)
        e = INF if r == 0 else 1 / r
        if not (1 <= e and e <= q_i):
            raise ValidationError(
                f"derived exponent {exponent_str(e)} violates 1 <= p_i <= q_i = {exponent_str(q_i)}"
            )
        outer.append(e)
    # the inner exponent differs per factor here, so build the specs explicitly
    specs = []
    for s, q_i, p_i in zip(subsets, qs, outer):
        inner = [(q_i, axes[j - 1]) for j in range(1, n + 1) if j not in s]
        cols = inner + [(p_i, axes[j - 1]) for j in s]
        specs.append(NormSpec(tuple(cols)))
    params_norm = {"n": n, "k": k, "q": [exponent_to_doc(e) for e in qs], **c_params}
    if params.get("axes") is not None:
        params_norm["axes"] = list(axes)
    derived = {
        "M": m,
        "subsets": [list(s) for s in subsets],
        "epsilon": str(epsilon),
        "epsilon_float": float(epsilon),
        "c": [_rational_doc(c) for c in coeffs],
        "c_float": [float(c) for c in coeffs],
        "p": [exponent_str(e) for e in outer],
        "p_float": [to_float(e) for e in outer],
    }
    return InequalityInstance(
        kind=kind,
        axis_ids=axes,
        arity=m,
        lhs_form="product_integral",
        lhs_exponent=None,
        lhs_spec=None,
        rhs=tuple(RhsFactor(s, Fraction(1), i) for i, s in enumerate(specs)),
        sandwich_lower=None,
        params=params_norm,
        derived=derived,
    )


def _build_quad6(params):
    fixed = {
        "n": 4,
        "k": 2,
        "q": [12] * 6,
        "c": ["1/2", "1/3", "1/6", "1/6", "1/3", "1/2"],
        "axes": params.get("axes"),
    }
    inst = _build_blei_ps(fixed, kind="Quad6")
    params_norm = {}
    if params.get("axes") is not None:
        params_norm["axes"] = list(inst.axis_ids)
    return InequalityInstance(
        kind="Quad6",
        axis_ids=inst.axis_ids,
        arity=inst.arity,
        lhs_form=inst.lhs_form,
        lhs_exponent=inst.lhs_exponent,
        lhs_spec=inst.lhs_spec,
        rhs=inst.rhs,
        sandwich_lower=None,
        params=params_norm,
        derived=inst.derived,
    )


_BUILDERS = {
    "HolderMixed": _build_holder_mixed,
    "MinkowskiRaise": _build_minkowski_raise,
    "SortedSandwich": _build_sorted_sandwich,
    "SymmetricHolder": _build_symmetric_holder,
    "SymmetricGM": _build_symmetric_gm,
    "SymmetricGM1": _build_symmetric_gm1,
    "Littlewood43": _build_littlewood43,
    "Blei21": _build_blei21,
    "BleiQP": _build_blei_qp,
    "PopaSinnamonFirst": lambda p: _build_popa_sinnamon("PopaSinnamonFirst", p),
    "PopaSinnamonSecond": lambda p: _build_popa_sinnamon("PopaSinnamonSecond", p),
    "BleiPS": _build_blei_ps,
    "Quad6": _build_quad6,
}


def build_instance(kind: str, params: dict | None = None) -> InequalityInstance:
    """Construct a catalog instance, deriving every dependent exponent exactly."""
    if kind not in _BUILDERS:
        raise ValidationError(f"unknown instance kind {kind!r}; known: {list(KINDS)}")
    return _BUILDERS[kind](dict(params or {}))


def instance_to_doc(inst: InequalityInstance) -> dict:
    return {
        "kind": inst.kind,
        "params": copy.deepcopy(inst.params),
        "derived": copy.deepcopy(inst.derived),
    }


def instance_from_doc(doc) -> InequalityInstance:
    """Rebuild an instance from its document; stored derived data must match."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("instance document must be an object with a 'kind'")
    inst = build_instance(doc["kind"], doc.get("params") or {})
    if "derived" in doc and doc["derived"] is not None:
        if doc["derived"] != inst.derived:
            stored, fresh = doc["derived"], inst.derived
            bad = sorted(
                key
                for key in set(stored) | set(fresh)
                if stored.get(key) != fresh.get(key)
            )
            raise ValidationError(
                f"derived fields do not match recomputation: {bad}"
            )
    return inst


# ---------------------------------------------------------------------------
# evaluation

def _resolve_inputs(inst: InequalityInstance, tensors) -> list[Tensor]:
    tensors = list(tensors)
    if len(tensors) == inst.arity:
        return tensors
    if len(tensors) == 1 and inst.arity > 1:
        return tensors * inst.arity  # one function in every slot
    raise ValidationError(
        f"{inst.kind} takes {inst.arity} tensors (or 1 to broadcast), got {len(tensors)}"
    )


def _pair_ratio(log_lhs: float, log_rhs: float, tolerance: float):
    """(ratio, hard_failure) under the 0/0 -> 0 convention."""
    if log_rhs == -math.inf:
        if log_lhs == -math.inf or math.exp(log_lhs) <= tolerance:
            return 0.0, False
        return math.inf, True
    return math.exp(log_lhs - log_rhs), False


def evaluate_instance(
    inst: InequalityInstance,
    tensors,
    tolerance: float = 1e-8,
    seed: int | None = None,
    trial: dict | None = None,
) -> VerificationReport:
    """Evaluate both sides in the log domain and report the ratio.

    pass <=> ratio <= 1 + tolerance; a zero right side with a left side above
    tolerance is flagged as a hard failure.
    """
    fs = _resolve_inputs(inst, tensors)
    space = fs[0].space
    for t in fs[1:]:
        if t.space != space:
            raise ValidationError("all tensors must live on one space")
    if set(space.ids) != set(inst.axis_ids):
        raise ValidationError(
            f"instance axes {sorted(inst.axis_ids)} do not match space axes {sorted(space.ids)}"
        )
    meta = dict(trial or {})
    meta["kind"] = inst.kind
    if inst.derived.get("notes"):
        meta["notes"] = list(inst.derived["notes"])

    log_rhs = 0.0
    for factor in inst.rhs:
        log_rhs += float(factor.weight) * mixed_norm_log(fs[factor.input_index], factor.spec)

    if inst.lhs_form == "product_integral":
        log_lhs = integrate_product_log(fs)
    elif inst.lhs_form == "gm_lp_norm":
        acc = log_values(fs[0])
        for t in fs[1:]:
            acc = acc + log_values(t)
        acc = acc / len(fs)
        uniform = NormSpec.uniform(inst.lhs_exponent, space.ids)
        log_lhs = mixed_norm_log_values(acc, space, uniform)
    elif inst.lhs_form == "mixed_norm":
        log_lhs = mixed_norm_log(fs[0], inst.lhs_spec)
    else:
        raise ValidationError(f"unknown lhs form {inst.lhs_form!r}")

    if inst.kind == "SortedSandwich":
        log_lo = mixed_norm_log(fs[0], inst.sandwich_lower)
        r1, h1 = _pair_ratio(log_lo, log_lhs, tolerance)  # lower <= middle
        r2, h2 = _pair_ratio(log_lhs, log_rhs, tolerance)  # middle <= upper
        meta["log_lower"], meta["log_middle"], meta["log_upper"] = log_lo, log_lhs, log_rhs
        if r1 >= r2:
            ratio, hard = r1, h1
            lhs_v, rhs_v = math.exp(log_lo), math.exp(log_lhs)
        else:
            ratio, hard = r2, h2
            lhs_v, rhs_v = math.exp(log_lhs), math.exp(log_rhs)
    else:
        ratio, hard = _pair_ratio(log_lhs, log_rhs, tolerance)
        lhs_v, rhs_v = math.exp(log_lhs), math.exp(log_rhs)
        meta["log_lhs"], meta["log_rhs"] = log_lhs, log_rhs

    passed = (not hard) and ratio <= 1 + tolerance
    if math.isfinite(rhs_v) and math.isfinite(lhs_v):
        margin = rhs_v - lhs_v
    elif rhs_v == lhs_v:
        margin = 0.0
    else:
        margin = math.inf if rhs_v > lhs_v else -math.inf
    return VerificationReport(
        lhs=lhs_v,
        rhs=rhs_v,
        ratio=ratio,
        margin=margin,
        passed=passed,
        hard_failure=hard,
        tolerance=tolerance,
        seed=seed,
        trial=meta,
    )
