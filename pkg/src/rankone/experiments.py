"""Monte Carlo experiments: ratio-distribution estimation, bound
verification, tail comparisons, the reproducing-kernel identity check and
deterministic report export.

Per-sample seeds are derived from (master seed, sample index), so results are
identical regardless of worker count; reports serialize with stable key order
and fixed float formatting.
"""

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field, replace

import numpy as np

from .bounds import (
    bounds_general,
    bounds_partially_symmetric,
    bounds_symmetric,
    bounds_symmetric_large_d,
    projection_moment,
    projection_tail_bound,
    tail_bounds_models,
)
from .harmonic import (
    harmonic_basis,
    l2_sphere_inner,
    bw_l2_constant,
    zonal,
    zonal_pole_value,
)
from .poly import bw_inner
from .sampling import (
    SeedSpec,
    gaussian_harmonic,
    gaussian_tensor,
    kostlan_form,
    kostlan_multi,
    projection_ratio_sample,
    uniform_sphere,
)
from .spectral import (
    MaximizerConfig,
    ratio as ratio_of,
    spectral_norm_symmetric,
)
from .tensor import COMPLEX, REAL, Tensor, UnitVectorTuple, rank_one


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RatioStats:
    model: str
    params: dict
    sample_count: int
    records: tuple  # (index, ratio, converged)
    min: float
    mean: float
    max: float
    quantiles: dict
    stderr: float

    def __post_init__(self):
        if not self.min <= self.mean <= self.max:
            raise ValueError("inconsistent ratio statistics")


@dataclass(frozen=True)
class Check:
    name: str
    relation: str
    lhs: float
    rhs: float
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    title: str
    checks: tuple
    stats: tuple = ()  # RatioStats entries
    bound_info: dict = dataclass_field(default_factory=dict)
    metadata: dict = dataclass_field(default_factory=dict)

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks)


# ------------------------------------------------------------------ sampling


def _draw(model, params, seed, index):
    if model == "gaussian_tensor":
        return gaussian_tensor(tuple(params["shape"]), params["field"], seed, index)
    if model == "kostlan":
        return kostlan_form(params["d"], params["n"], params["field"], seed, index)
    if model == "harmonic":
        return gaussian_harmonic(params["d"], params["n"], seed, index)
    if model == "kostlan_multi":
        return kostlan_multi(
            tuple(params["ds"]), tuple(params["ns"]), params["field"], seed, index
        )
    if model == "rank_one":
        # test hook: every draw is a rank-one tensor, so every ratio is 1
        shape, field = tuple(params["shape"]), params["field"]
        vecs = tuple(
            uniform_sphere(n, field, SeedSpec(seed, f"rank_one_{j}"), index)
            for j, n in enumerate(shape)
        )
        return rank_one(1.0, UnitVectorTuple(vecs, field))
    if model == "identity":
        # test hook: identity matrix, ratio is exactly 1/sqrt(n)
        return Tensor(np.eye(params["n"]), REAL)
    raise UsageError(f"unknown model {model!r}")


def _cfg_seed(seed, index):
    # decouple optimizer restarts from the sample stream
    return (int(seed) * 0x9E3779B1 + index * 0x85EBCA77) % (2**63)


def _ratio_record(args):
    model, params, cfg, seed, index = args
    obj = _draw(model, params, seed, index)
    cfg = replace(cfg, seed=_cfg_seed(seed, index))
    res_ratio, converged = _ratio_with_flag(obj, cfg)
    return index, res_ratio, converged


def _ratio_with_flag(obj, cfg):
    from .spectral import spectral_value, total_norm

    res = spectral_value(obj, cfg)
    total = total_norm(obj)
    return res.value / total, bool(res.converged)


def estimate_ratio_distribution(model, params, samples, cfg, seed, workers=1):
    if samples < 1:
        raise UsageError(f"need samples >= 1, got {samples}")
    tasks = [(model, dict(params), cfg, int(seed), i) for i in range(samples)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            recs = list(pool.map(_ratio_record, tasks, chunksize=8))
    else:
        recs = [_ratio_record(t) for t in tasks]
    recs.sort(key=lambda r: r[0])
    vals = np.array([r[1] for r in recs])
    if np.any(vals <= 0) or np.any(vals > 1 + 1e-9):
        raise RuntimeError("ratio estimate outside (0, 1]")
    qs = np.quantile(vals, [0.1, 0.5, 0.9])
    return RatioStats(
        model=model,
        params=dict(params),
        sample_count=samples,
        records=tuple((i, float(v), bool(c)) for i, v, c in recs),
        min=float(vals.min()),
        mean=float(vals.mean()),
        max=float(vals.max()),
        quantiles={"q10": float(qs[0]), "q50": float(qs[1]), "q90": float(qs[2])},
        stderr=float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0,
    )


# ------------------------------------------------------------- verification


def _bound_set_for(model, params):
    field = params.get("field", REAL)
    if model in ("gaussian_tensor", "rank_one"):
        return bounds_general(tuple(params["shape"]), field)
    if model == "kostlan":
        return bounds_symmetric(params["d"], params["n"], field)
    if model == "harmonic":
        return bounds_symmetric(params["d"], params["n"], REAL)
    if model == "kostlan_multi":
        return bounds_partially_symmetric(tuple(params["ds"]), tuple(params["ns"]), field)
    if model == "identity":
        return bounds_symmetric(2, params["n"], REAL)
    raise UsageError(f"unknown model {model!r}")


_EXPECTATION_KEY = {
    "gaussian_tensor": "expectation_upper",
    "kostlan": "expectation_upper_kostlan",
    "harmonic": "expectation_upper_harmonic",
}

_HARD_TOL = 1e-9


def verify_bounds(model, params, samples, cfg, seed, workers=1):
    bset = _bound_set_for(model, params)
    stats = estimate_ratio_distribution(model, params, samples, cfg, seed, workers)
    checks = []

    # (a) per-sample hard lower bound; the optimizer under-approximates the
    # true ratio, so apparent violations are re-certified with 4x starts
    worst = stats.min
    violators = [r for r in stats.records if r[1] < bset.lower - _HARD_TOL]
    if violators:
        recheck = replace(cfg, starts=cfg.starts * 4)
        still = []
        for idx, _, _ in violators:
            obj = _draw(model, params, int(seed), idx)
            v, _ = _ratio_with_flag(obj, replace(recheck, seed=_cfg_seed(seed, idx)))
            worst = max(worst, v) if v > worst else worst
            if v < bset.lower - _HARD_TOL:
                still.append((idx, v))
        passed = not still
        lhs = min(v for _, v in still) if still else max(worst, bset.lower)
    else:
        passed = True
        lhs = worst
    checks.append(
        Check("per-sample-ratio-ge-lower [lower-bound]", ">=", lhs, bset.lower, passed)
    )

    # (b) the empirical minimum witnesses A(V) from above
    checks.append(
        Check(
            "empirical-min-ge-lower [lower-bound]",
            ">=",
            stats.min if passed else lhs,
            bset.lower - _HARD_TOL,
            (stats.min >= bset.lower - _HARD_TOL) or passed,
        )
    )

    # (c) mean against the expectation bound, skipped when vacuous
    key = _EXPECTATION_KEY.get(model)
    if key is not None and key in bset.extras:
        eb = bset.extras[key]
        if eb <= 1.0:
            checks.append(
                Check(
                    "empirical-mean-le-expectation [expectation-bound]",
                    "<=",
                    stats.mean,
                    eb + 3.0 * stats.stderr,
                    stats.mean <= eb + 3.0 * stats.stderr,
                )
            )
        else:
            checks.append(
                Check(
                    "expectation-bound-vacuous-skipped [expectation-bound]",
                    "<=",
                    1.0,
                    eb,
                    True,
                )
            )

    # (d) complex vs real uniform norm for real symmetric models
    if model in ("kostlan", "harmonic") and params.get("field", REAL) == REAL:
        factor = math.sqrt(2.0 ** params["d"])
        sub = min(5, samples)
        ok = True
        worst_pair = (0.0, 0.0)
        for idx in range(sub):
            f = _draw(model, params, int(seed), idx)
            scfg = replace(cfg, seed=_cfg_seed(seed, idx))
            vr = spectral_norm_symmetric(f, scfg).value
            vc = spectral_norm_symmetric(f, scfg, over_field=COMPLEX).value
            if vc > factor * vr + 1e-6:
                ok = False
                worst_pair = (vc, factor * vr)
        checks.append(
            Check(
                "complex-le-sqrt2d-real [real-vs-complex-norm]",
                "<=",
                worst_pair[0],
                worst_pair[1] if not ok else factor,
                ok,
            )
        )

    return VerificationReport(
        title=f"verify-bounds {model}",
        checks=tuple(checks),
        stats=(stats,),
        bound_info=_bound_dict(bset),
        metadata={"seed": int(seed), "samples": samples, "config": _cfg_dict(cfg)},
    )


def _bound_dict(bset):
    return {
        "problem": bset.problem,
        "field": bset.field,
        "lower": bset.lower,
        "upper": bset.upper,
        "vacuous": bset.vacuous,
        "extras": dict(bset.extras),
        "provenance": list(bset.provenance),
    }


def _cfg_dict(cfg):
    return {
        "starts": cfg.starts,
        "max_iters": cfg.max_iters,
        "tol": cfg.tol,
        "seed": cfg.seed,
    }


# ------------------------------------------------------------- tail bounds


def tail_empirical_vs_bound(model, params, samples, t_grid, seed, cfg=None, workers=1):
    if not len(t_grid):
        raise UsageError("empty t grid")
    if samples < 100:
        raise UsageError(f"need samples >= 100, got {samples}")
    checks = []
    stats = ()
    if model == "projection":
        N, k = params["N"], params["k"]
        field = params.get("field", REAL)
        vals = np.array(
            [projection_ratio_sample(N, k, seed, i, field) for i in range(samples)]
        )
        for t in t_grid:
            emp = float(np.mean(vals >= t))
            bound = min(1.0, projection_tail_bound(N, k, t, field))
            se = math.sqrt(max(emp * (1.0 - emp), 1.0 / samples) / samples)
            checks.append(
                Check(
                    f"tail-projection-t={t:g} [projection-tail]",
                    "<=",
                    emp,
                    bound + 3.0 * se,
                    emp <= bound + 3.0 * se,
                )
            )
        for ell in (2, 4, 6):
            emp_m = float(np.mean(vals**ell) ** (1.0 / ell))
            theo = projection_moment(N, k, ell, field)
            checks.append(
                Check(
                    f"moment-l={ell} [projection-moment]",
                    "~",
                    emp_m,
                    theo,
                    abs(emp_m - theo) <= 0.05 * theo,
                )
            )
    else:
        cfg = cfg or MaximizerConfig()
        rstats = estimate_ratio_distribution(model, params, samples, cfg, seed, workers)
        stats = (rstats,)
        vals = np.array([r[1] for r in rstats.records])
        for t in t_grid:
            emp = float(np.mean(vals >= t))
            tb = tail_bounds_models(model, params, params.get("field", REAL), t)
            bound = tb.clipped
            se = math.sqrt(max(emp * (1.0 - emp), 1.0 / samples) / samples)
            checks.append(
                Check(
                    f"tail-{model}-t={t:g} [model-tail]",
                    "<=",
                    emp,
                    bound + 3.0 * se,
                    emp <= bound + 3.0 * se,
                )
            )
    return VerificationReport(
        title=f"tail {model}",
        checks=tuple(checks),
        stats=stats,
        metadata={"seed": int(seed), "samples": samples, "t_grid": [float(t) for t in t_grid]},
    )


# --------------------------------------------- reproducing-kernel identity


def verify_bw_l2_constant(d, n, seed=0):
    if d > 8 or n > 5:
        raise UsageError("exact path limited to d <= 8, n <= 5")
    c = bw_l2_constant(d, n)
    checks = []
    ok = True
    worst = 0.0
    for i in range(20):
        h1 = gaussian_harmonic(d, n, seed, 2 * i)
        h2 = gaussian_harmonic(d, n, seed, 2 * i + 1)
        lhs = bw_inner(h1, h2).real
        rhs = c * l2_sphere_inner(h1, h2)
        scale = max(abs(lhs), abs(rhs), 1e-30)
        rel = abs(lhs - rhs) / scale
        worst = max(worst, rel)
        if rel > 1e-8:
            ok = False
    checks.append(Check("bw-eq-const-l2 [bw-vs-l2]", "~", worst, 1e-8, ok))

    basis = harmonic_basis(d, n)
    x = uniform_sphere(n, REAL, seed, 999)
    z = zonal(basis, np.asarray(x, dtype=float))
    lhs = l2_sphere_inner(z, z)
    rhs = zonal_pole_value(d, n)
    checks.append(
        Check(
            "zonal-l2-norm [zonal-kernel]",
            "~",
            lhs,
            rhs,
            abs(lhs - rhs) <= 1e-8 * max(abs(rhs), 1.0),
        )
    )
    return VerificationReport(
        title=f"bw-l2-constant d={d} n={n}",
        checks=tuple(checks),
        metadata={"seed": int(seed), "d": d, "n": n, "constant": c},
    )


# --------------------------------------------------------------- large-d


def trend_large_d(n, d_grid, samples, seed, cfg=None, workers=1):
    d_grid = list(d_grid)
    if any(b <= a for a, b in zip(d_grid, d_grid[1:])):
        raise UsageError("d grid must be increasing")
    cfg = cfg or MaximizerConfig()
    rows = []
    checks = []
    uppers = []
    for d in d_grid:
        bset = bounds_symmetric_large_d(d, n, REAL)
        stats = estimate_ratio_distribution(
            "harmonic", {"d": d, "n": n}, samples, cfg, seed, workers
        )
        rows.append(
            {
                "d": d,
                "lower": bset.lower,
                "upper": bset.upper,
                "empirical_min": stats.min,
                "empirical_mean": stats.mean,
            }
        )
        uppers.append(bset.upper)
        checks.append(
            Check(
                f"lower-le-empirical-min-d={d} [large-d-sandwich]",
                "<=",
                bset.lower,
                stats.min,
                bset.lower <= stats.min + _HARD_TOL,
            )
        )
    decreasing = all(b < a for a, b in zip(uppers, uppers[1:]))
    checks.append(
        Check("upper-decreasing-in-d [large-d-sandwich]", "<", 0.0, 1.0, decreasing)
    )
    # crossover: first grid d where the large-d lower beats the trivial one
    crossover = None
    for d in d_grid:
        large = bounds_symmetric_large_d(d, n, REAL).lower
        trivial = n ** (-(d - 1) / 2.0)
        if large > trivial:
            crossover = d
            break
    return VerificationReport(
        title=f"trend-large-d n={n}",
        checks=tuple(checks),
        bound_info={"rows": rows, "crossover_d": crossover},
        metadata={"seed": int(seed), "samples": samples, "n": n, "d_grid": d_grid},
    )


# ----------------------------------------------------------------- export


def _fmt(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, float):
        return "%.12e" % v
    if isinstance(v, dict):
        return {k: _fmt(v[k]) for k in sorted(v)}
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    return v


def report_to_dict(report):
    return {
        "title": report.title,
        "checks": [
            {
                "name": c.name,
                "relation": c.relation,
                "lhs": c.lhs,
                "rhs": c.rhs,
                "passed": c.passed,
            }
            for c in report.checks
        ],
        "stats": [
            {
                "model": s.model,
                "params": s.params,
                "sample_count": s.sample_count,
                "min": s.min,
                "mean": s.mean,
                "max": s.max,
                "quantiles": s.quantiles,
                "stderr": s.stderr,
                "records": [list(r) for r in s.records],
            }
            for s in report.stats
        ],
        "bound_info": report.bound_info,
        "metadata": report.metadata,
    }


def render_report(report, fmt="json"):
    data = _fmt(report_to_dict(report))
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["kind", "name", "relation", "lhs", "rhs", "passed"])
        for c in report.checks:
            writer.writerow(
                ["check", c.name, c.relation, "%.12e" % c.lhs, "%.12e" % c.rhs, c.passed]
            )
        for s in report.stats:
            for idx, val, conv in s.records:
                writer.writerow(["record", s.model, str(idx), "%.12e" % val, "", conv])
        return buf.getvalue()
    raise UsageError(f"unknown format {fmt!r}")


def export_report(report, path, fmt="json"):
    text = render_report(report, fmt)
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
