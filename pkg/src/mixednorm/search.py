"""Randomized soundness sweeps, sharpness probes, and violation search.

Everything here is deterministic given a master seed: per-trial generators
are derived from (seed, kind index, trial index), so a sweep gives the same
report whether it runs on one thread or eight.  Hill climbing perturbs
tensors multiplicatively (exponents may be infinite, so there is no gradient
to follow) and always seeds from the indicator family that makes the
geometric-mean inequalities tight.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .catalog import (
    KINDS,
    InequalityInstance,
    build_instance,
    evaluate_instance,
    instance_to_doc,
)
from .documents import space_to_doc, tensor_to_doc
from .errors import ValidationError
from .exponents import _Infinity, as_exponent, exponent_str, reciprocal
from .perms import all_permutations, lowers, orbit, orbit_info, raises
from .spaces import Axis, NormSpec, ProductSpace, Tensor, mixed_norm_log


@dataclass(frozen=True)
class TrialConfig:
    """Shared knobs for randomized trials."""

    seed: int = 0
    trials: int = 500
    axis_size_range: tuple[int, int] = (1, 5)
    weight_range: tuple[float, float] = (1e-3, 1e3)
    value_range: tuple[float, float] = (1e-2, 1e2)
    tolerance: float = 1e-8
    kinds: tuple[str, ...] | None = None
    max_axes: int = 5

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError("trial count must be positive")
        lo, hi = self.axis_size_range
        if not (1 <= lo <= hi):
            raise ValidationError(f"bad axis size range {self.axis_size_range}")
        for name in ("weight_range", "value_range"):
            lo, hi = getattr(self, name)
            if not (0 < lo <= hi) or not math.isfinite(hi):
                raise ValidationError(f"bad {name} {getattr(self, name)}")
        if self.kinds is not None:
            unknown = [k for k in self.kinds if k not in KINDS]
            if unknown:
                raise ValidationError(f"unknown kinds {unknown}")
            object.__setattr__(self, "kinds", tuple(self.kinds))

    def to_doc(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "axis_size_range": list(self.axis_size_range),
            "weight_range": list(self.weight_range),
            "value_range": list(self.value_range),
            "tolerance": self.tolerance,
            "kinds": list(self.kinds) if self.kinds is not None else None,
            "max_axes": self.max_axes,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TrialConfig":
        if not isinstance(doc, dict):
            raise ValidationError("trial config must be an object")
        kwargs = {}
        for name, conv in (
            ("seed", int),
            ("trials", int),
            ("axis_size_range", lambda v: tuple(int(x) for x in v)),
            ("weight_range", lambda v: tuple(float(x) for x in v)),
            ("value_range", lambda v: tuple(float(x) for x in v)),
            ("tolerance", float),
            ("max_axes", int),
        ):
            if name in doc and doc[name] is not None:
                kwargs[name] = conv(doc[name])
        if doc.get("kinds") is not None:
            kwargs["kinds"] = tuple(doc["kinds"])
        return cls(**kwargs)


def _rng(*key) -> np.random.Generator:
    return np.random.default_rng([int(k) for k in key])


def _log_uniform(rng, lo, hi, shape):
    if lo == hi:
        return np.full(shape, lo)
    return np.exp(rng.uniform(math.log(lo), math.log(hi), shape))


def _draw_space(rng, cfg: TrialConfig, axis_ids) -> ProductSpace:
    lo, hi = cfg.axis_size_range
    axes = []
    for aid in axis_ids:
        size = int(rng.integers(lo, hi + 1))
        weights = _log_uniform(rng, *cfg.weight_range, size)
        axes.append(Axis(aid, tuple(float(w) for w in weights)))
    return ProductSpace(tuple(axes))


def _draw_tensors(rng, cfg: TrialConfig, space: ProductSpace, count: int) -> list[Tensor]:
    return [
        Tensor(space, _log_uniform(rng, *cfg.value_range, space.shape))
        for _ in range(count)
    ]


def random_inputs(
    cfg: TrialConfig,
    arity: int,
    n: int,
    trial_index: int = 0,
    axis_ids=None,
) -> tuple[ProductSpace, list[Tensor]]:
    """A random space with n axes and `arity` tensors, deterministic in
    (cfg.seed, trial_index)."""
    if axis_ids is None:
        axis_ids = tuple(f"x{i}" for i in range(1, n + 1))
    if len(axis_ids) != n:
        raise ValidationError(f"expected {n} axis ids, got {len(axis_ids)}")
    rng = _rng(cfg.seed, trial_index)
    space = _draw_space(rng, cfg, axis_ids)
    return space, _draw_tensors(rng, cfg, space, arity)


# ---------------------------------------------------------------------------
# sharpness probe

@dataclass(frozen=True)
class ScalingProbe:
    """Ratios of the indicator family against the closed-form power law."""

    spec: NormSpec
    p: Fraction
    ts: tuple[float, ...]
    empirical: tuple[float, ...]
    analytic: tuple[float, ...]

    @property
    def max_rel_err(self) -> float:
        worst = 0.0
        for e, a in zip(self.empirical, self.analytic):
            if a != 0:
                worst = max(worst, abs(e - a) / abs(a))
        return worst

    def to_doc(self) -> dict:
        return {
            "spec": self.spec.to_doc(),
            "p": exponent_str(as_exponent(self.p)),
            "rows": [
                {"t": t, "empirical": e, "analytic": a}
                for t, e, a in zip(self.ts, self.empirical, self.analytic)
            ],
            "max_rel_err": self.max_rel_err,
        }


def _indicator_space(axis_ids, t: float) -> ProductSpace:
    """Each axis gets ceil(t) unit atoms, the last weighing t - floor(t) if fractional."""
    if t <= 0:
        raise ValidationError(f"scale parameter must be positive, got {t}")
    count = math.ceil(t)
    weights = [1.0] * count
    frac = t - math.floor(t)
    if frac > 0:
        weights[-1] = frac
    return ProductSpace(tuple(Axis(aid, tuple(weights)) for aid in axis_ids))


def scaling_probe(spec: NormSpec, p, t_grid) -> ScalingProbe:
    """Probe the full-box indicator family at scales t.

    The left side is the plain L^p norm, the right side the geometric mean
    of the orbit norms; for the indicator of a box of measure t per axis the
    exact ratio is t^(n (1/p - 1/pbar)), which pins pbar as the only possible
    left-hand exponent.  Every orbit element gives the same norm on an
    indicator box, so the exponent-row orbit is used (no sortedness needed).
    """
    p = as_exponent(p)
    if isinstance(p, _Infinity):
        raise ValidationError("probe exponent must be finite")
    info = orbit_info(spec)
    orbit_specs = orbit(spec, "exponents")
    n = spec.n
    expo = float(n * (reciprocal(p) - reciprocal(info.harmonic_mean)))
    ts, empirical, analytic = [], [], []
    for t in t_grid:
        t = float(t)
        space = _indicator_space(spec.axis_ids, t)
        ones = Tensor.constant(space, 1.0)
        log_lhs = mixed_norm_log(ones, NormSpec.uniform(p, spec.axis_ids))
        log_rhs = sum(mixed_norm_log(ones, s) for s in orbit_specs) / len(orbit_specs)
        ts.append(t)
        empirical.append(math.exp(log_lhs - log_rhs))
        analytic.append(t**expo)
    return ScalingProbe(spec, p, tuple(ts), tuple(empirical), tuple(analytic))


# ---------------------------------------------------------------------------
# violation search

@dataclass(frozen=True)
class SearchResult:
    best_ratio: float
    witnesses: tuple[Tensor, ...]
    evaluations: int
    starts: int
    best_start: int
    seed: int

    def to_doc(self) -> dict:
        return {
            "best_ratio": self.best_ratio if math.isfinite(self.best_ratio) else str(self.best_ratio),
            "evaluations": self.evaluations,
            "starts": self.starts,
            "best_start": self.best_start,
            "seed": self.seed,
            "witnesses": [tensor_to_doc(t, inline_space=False) for t in self.witnesses],
        }


def _indicator_starts(space: ProductSpace, arity: int) -> list[list[np.ndarray]]:
    """Box indicators aligned with the weight order — the scaling family's
    counterpart on a fixed space.  Small boxes of light atoms and large boxes
    of heavy atoms are where power-law violations live."""
    starts = []
    seen = set()
    max_size = max(a.size for a in space.axes)
    for ascending in (True, False):
        orders = [
            np.argsort(np.asarray(a.weights))[:: 1 if ascending else -1] for a in space.axes
        ]
        for level in range(1, max_size + 1):
            vals = np.zeros(space.shape)
            picks = [order[: min(level, len(order))] for order in orders]
            vals[np.ix_(*picks)] = 1.0
            key = vals.tobytes()
            if key in seen:
                continue
            seen.add(key)
            starts.append([vals.copy() for _ in range(arity)])
    return starts


def maximize_ratio(
    inst: InequalityInstance,
    space: ProductSpace,
    seed: int,
    max_evals: int = 10_000,
    restarts: int = 6,
    init_step: float = 0.5,
    decay: float = 0.7,
    min_step: float = 1e-4,
    value_range: tuple[float, float] = (1e-2, 1e2),
    tolerance: float = 1e-8,
) -> SearchResult:
    """Multi-start hill climbing for the largest lhs/rhs ratio.

    Starts from the box-indicator family plus seeded random tensors, then
    climbs with multiplicative coordinate perturbations, shrinking the step
    on failure.  Deterministic in the seed; re-evaluating the returned
    witnesses reproduces best_ratio exactly.
    """
    if set(space.ids) != set(inst.axis_ids):
        raise ValidationError("space axes do not match the instance")
    if max_evals < 1:
        raise ValidationError("max_evals must be positive")

    def ratio_of(arrays) -> float:
        tensors = [Tensor(space, a) for a in arrays]
        return evaluate_instance(inst, tensors, tolerance=tolerance).ratio

    starts = _indicator_starts(space, inst.arity)
    rng_init = _rng(seed, 1)
    for _ in range(restarts):
        starts.append(
            [
                _log_uniform(rng_init, *value_range, space.shape)
                for _ in range(inst.arity)
            ]
        )
    per_start = max(2, max_evals // max(1, len(starts)))
    evals = 0
    best_ratio = -math.inf
    best_arrays = None
    best_start = 0
    for si, start in enumerate(starts):
        if evals >= max_evals:
            break
        rng = _rng(seed, 2, si)
        current = [np.array(a) for a in start]
        current_ratio = ratio_of(current)
        evals += 1
        used = 1
        step = init_step
        while evals < max_evals and used < per_start and step >= min_step:
            candidate = [
                a * np.exp(step * rng.standard_normal(a.shape)) for a in current
            ]
            cand_ratio = ratio_of(candidate)
            evals += 1
            used += 1
            if cand_ratio > current_ratio:
                current, current_ratio = candidate, cand_ratio
            else:
                step *= decay
        if current_ratio > best_ratio:
            best_ratio, best_arrays, best_start = current_ratio, current, si
    witnesses = tuple(Tensor(space, a) for a in best_arrays)
    return SearchResult(
        best_ratio=best_ratio,
        witnesses=witnesses,
        evaluations=evals,
        starts=len(starts),
        best_start=best_start,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# random instance parameters per kind

_EXP_POOL = ("1/3", "1/2", "2/3", "1", "4/3", "3/2", "2", "3", "4", "inf")
_FINITE_POOL = ("1/3", "1/2", "2/3", "1", "4/3", "3/2", "2", "3", "4")


def _pick_exponents(rng, n, pool=_EXP_POOL, distinct_cap=None):
    pool = list(pool)
    if distinct_cap is not None and distinct_cap < len(pool):
        idx = rng.choice(len(pool), size=distinct_cap, replace=False)
        pool = [pool[i] for i in sorted(idx)]
    return [pool[int(rng.integers(len(pool)))] for _ in range(n)]


def _sorted_desc(exps):
    return sorted(exps, key=lambda s: as_exponent(s), reverse=True)


def _spec_doc(exps, n):
    return NormSpec(tuple(zip(exps, (f"x{i}" for i in range(1, n + 1))))).to_doc()


def _random_q_list(rng, count, denom=12):
    """Exponents q with sum of reciprocals <= 1, as exact rationals."""
    u = rng.integers(0, 4, count)
    d = max(denom, int(u.sum()))
    out = []
    for ui in u:
        ui = int(ui)
        out.append("inf" if ui == 0 else str(Fraction(d, ui)))
    return out


def random_params(kind: str, rng: np.random.Generator) -> dict:
    """A valid random parameterization for the given catalog kind."""
    if kind in ("Littlewood43", "Quad6"):
        return {}
    if kind == "HolderMixed":
        n = int(rng.integers(1, 6))
        m = int(rng.integers(2, 5))
        axes = [f"x{i}" for i in range(1, n + 1)]
        recips = np.zeros((m, n), dtype=object)
        for j in range(n):
            u = rng.integers(0, 7, m)
            if u.sum() == 0:
                u[int(rng.integers(m))] = 1
            total = int(u.sum())
            for i in range(m):
                recips[i, j] = Fraction(int(u[i]), total)
        specs = []
        for i in range(m):
            cols = []
            for j in range(n):
                r = recips[i, j]
                p = "inf" if r == 0 else str(1 / r)
                cols.append({"p": p, "axis": axes[j]})
            specs.append({"columns": cols})
        return {"specs": specs}
    if kind == "MinkowskiRaise":
        n = int(rng.integers(2, 6))
        exps = _pick_exponents(rng, n)
        spec = NormSpec(tuple(zip(exps, (f"x{i}" for i in range(1, n + 1)))))
        direction = "raise" if rng.integers(2) else "lower"
        predicate = raises if direction == "raise" else lowers
        candidates = [p for p in all_permutations(n) if predicate(p, spec)]
        perm = candidates[int(rng.integers(len(candidates)))]
        return {"spec": spec.to_doc(), "perm": perm.to_doc(), "direction": direction}
    if kind == "SortedSandwich":
        n = int(rng.integers(1, 6))
        return {"spec": _spec_doc(_pick_exponents(rng, n), n)}
    if kind == "SymmetricHolder":
        n = int(rng.integers(1, 6))
        return {"spec": _spec_doc(_pick_exponents(rng, n, distinct_cap=3), n)}
    if kind in ("SymmetricGM", "SymmetricGM1"):
        n = int(rng.integers(1, 6))
        exps = _sorted_desc(_pick_exponents(rng, n, distinct_cap=3))
        return {"spec": _spec_doc(exps, n)}
    if kind == "Blei21":
        J = int(rng.integers(2, 6))
        K = int(rng.integers(1, J))
        return {"J": J, "K": K}
    if kind == "BleiQP":
        J = int(rng.integers(2, 6))
        K = int(rng.integers(1, J))
        while True:
            p = _FINITE_POOL[int(rng.integers(len(_FINITE_POOL)))]
            q = _EXP_POOL[int(rng.integers(len(_EXP_POOL)))]
            if as_exponent(p) < as_exponent(q):
                return {"J": J, "K": K, "q": q, "p": p}
    if kind in ("PopaSinnamonFirst", "PopaSinnamonSecond"):
        n = int(rng.integers(2, 6))
        return {"q": _random_q_list(rng, n)}
    if kind == "BleiPS":
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, n))
        m = math.comb(n, k)
        params = {"n": n, "k": k, "q": _random_q_list(rng, m, denom=24)}
        if rng.integers(2):
            params["strategy"] = "random"
            params["seed"] = int(rng.integers(2**31))
        return params
    raise ValidationError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# the sweep

def _run_trial(cfg: TrialConfig, kind: str, kind_index: int, t: int) -> dict:
    rng = _rng(cfg.seed, kind_index, t)
    params = random_params(kind, rng)
    inst = build_instance(kind, params)
    space = _draw_space(rng, cfg, inst.axis_ids)
    if inst.arity > 1 and rng.integers(2):
        count = 1  # exercise the broadcast path
    else:
        count = inst.arity
    tensors = _draw_tensors(rng, cfg, space, count)
    report = evaluate_instance(
        inst, tensors, tolerance=cfg.tolerance, seed=cfg.seed, trial={"index": t}
    )
    row = {"index": t, "ratio": report.ratio, "pass": report.passed}
    if not report.passed:
        row["witness"] = {
            "instance": instance_to_doc(inst),
            "space": space_to_doc(space),
            "tensors": [tensor_to_doc(x, inline_space=False) for x in tensors],
            "report": report.to_doc(),
        }
    return row


def sweep(cfg: TrialConfig, threads: int = 1) -> dict:
    """Run the full randomized soundness suite; the report is a pure function
    of cfg (thread count never changes a byte)."""
    kinds = [k for k in KINDS if cfg.kinds is None or k in cfg.kinds]
    report: dict = {"config": cfg.to_doc(), "kinds": {}, "pass": True}
    for kind in kinds:
        kind_index = KINDS.index(kind)
        task = lambda t, _k=kind, _ki=kind_index: _run_trial(cfg, _k, _ki, t)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                rows = list(pool.map(task, range(cfg.trials)))
        else:
            rows = [task(t) for t in range(cfg.trials)]
        ratios = [r["ratio"] for r in rows]
        worst = max(range(len(rows)), key=lambda i: ratios[i])
        failures = [r["witness"] for r in rows if not r["pass"]]
        all_pass = not failures
        report["kinds"][kind] = {
            "trials": cfg.trials,
            "max_ratio": ratios[worst] if math.isfinite(ratios[worst]) else str(ratios[worst]),
            "max_ratio_trial": worst,
            "failures": failures,
            "pass": all_pass,
        }
        report["pass"] = report["pass"] and all_pass
    return report
