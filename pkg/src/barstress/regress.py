"""Stress-curve models: symmetric 4PL sigmoid and quartic polynomial.

The sigmoid y = d + (a - d)/(1 + (x/c)^b) is fitted by damped Gauss-Newton
(Levenberg-Marquardt) from many starting points: a heuristic set around the
data envelope plus deterministic seeds from a coarse (b, c) grid on which
the linear parameters (a, d) are profiled out in closed form. The grid
matters because the RSS landscape is multimodal and has a flat power-law
ridge as c grows large; single-start solvers stall far from the optimum.

The quartic is an ordinary least-squares solve on a scaled monomial basis.
Model ranking uses AIC in the full Gaussian form n*ln(2*pi*rss/n) + n + 2k,
with the error variance not counted in k.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateX,
    MismatchedData,
    NonPositiveRss,
    TooFewPoints,
    UndefinedAtZero,
    ValidationError,
    ZeroTotalVariance,
)

_EXP_CLAMP = 700.0
_EXACT_FIT_REL = 1e-12


@dataclass(frozen=True)
class FourPLModel:
    """Four-parameter logistic: a, d asymptotes, c inflection, b slope."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError(f"non-finite sigmoid parameters {vals}")
        if self.c <= 0:
            raise ValidationError(f"inflection c must be > 0, got {self.c}")


@dataclass(frozen=True)
class QuarticModel:
    """Degree-4 polynomial a + b x + c x^2 + d x^3 + e x^4."""

    a: float
    b: float
    c: float
    d: float
    e: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d, self.e)
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError(f"non-finite polynomial coefficients {vals}")

    @property
    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e)


@dataclass(frozen=True)
class FitOptions:
    """Iteration, convergence, restart, and bound settings for fit_4pl.

    multistart_count is the number of heuristic starts (envelope guesses
    plus seeded random perturbations); profiled (b, c) grid seeds are added
    on top and are fully deterministic. c is bounded by
    [c_min, c_max_factor * max x]; the factor must be generous because
    near-power-law data pushes c orders of magnitude past the sample range.
    """

    max_iterations: int = 500
    tolerance: float = 1e-12
    multistart_count: int = 16
    b_min: float = 0.01
    b_max: float = 50.0
    c_min: float = 0.1
    c_max_factor: float = 1e6

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be > 0")
        if self.multistart_count < 1:
            raise ValidationError("multistart_count must be >= 1")
        if not (0 < self.b_min < self.b_max):
            raise ValidationError("need 0 < b_min < b_max")
        if not (0 < self.c_min and self.c_max_factor > 0):
            raise ValidationError("need c_min > 0 and c_max_factor > 0")


@dataclass(frozen=True)
class FitResult:
    """A fitted model with its goodness-of-fit summary."""

    model: FourPLModel | QuarticModel
    rss: float
    r_squared: float
    aic: float
    k: int
    n: int
    converged: bool
    iterations: int
    exact_fit: bool = False

    @property
    def model_type(self) -> str:
        return "4pl" if isinstance(self.model, FourPLModel) else "quartic"


def _as_xy(points) -> tuple[np.ndarray, np.ndarray]:
    pts = list(points)
    xs = np.asarray([p[0] for p in pts], dtype=np.float64)
    ys = np.asarray([p[1] for p in pts], dtype=np.float64)
    if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
        raise ValidationError("points must be finite")
    return xs, ys


def _sigmoid_t(xs: np.ndarray, b: float, c: float) -> np.ndarray:
    """(x/c)^b with x = 0 mapping to 0, overflow clamped."""
    t = np.zeros_like(xs)
    pos = xs > 0
    with np.errstate(over="ignore"):
        t[pos] = np.exp(np.clip(b * np.log(xs[pos] / c), -_EXP_CLAMP, _EXP_CLAMP))
    return t


def eval_4pl(model: FourPLModel, x) -> np.ndarray | float:
    """Evaluate the sigmoid at x >= 0 (scalar or array)."""
    xs = np.asarray(x, dtype=np.float64)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    if np.any(xs < 0):
        raise ValidationError("sigmoid evaluation requires x >= 0")
    if model.b <= 0 and np.any(xs == 0):
        raise UndefinedAtZero(f"x = 0 with slope b = {model.b}")
    t = _sigmoid_t(xs, model.b, model.c)
    y = model.d + (model.a - model.d) / (1.0 + t)
    return float(y[0]) if scalar else y


def eval_quartic(model: QuarticModel, x) -> np.ndarray | float:
    """Evaluate the polynomial at x (scalar or array), Horner order."""
    xs = np.asarray(x, dtype=np.float64)
    scalar = xs.ndim == 0
    y = model.a + xs * (model.b + xs * (model.c + xs * (model.d + xs * model.e)))
    return float(y) if scalar else y


def r_squared(observed, predicted) -> float:
    """1 - RSS/TSS with TSS about the observation mean."""
    obs = np.asarray(observed, dtype=np.float64)
    pred = np.asarray(predicted, dtype=np.float64)
    if obs.shape != pred.shape or obs.ndim != 1:
        raise MismatchedData(
            f"observed {obs.shape} and predicted {pred.shape} must be equal 1-D"
        )
    if obs.size < 2:
        raise MismatchedData("need at least 2 observations")
    tss = float(np.sum((obs - obs.mean()) ** 2))
    if tss == 0.0:
        raise ZeroTotalVariance("all observations identical")
    rss = float(np.sum((obs - pred) ** 2))
    return 1.0 - rss / tss


def aic(rss: float, n: int, k: int) -> float:
    """n*ln(2*pi*rss/n) + n + 2k (Gaussian likelihood, variance profiled)."""
    if not rss > 0:
        raise NonPositiveRss(f"AIC needs rss > 0, got {rss}")
    if n < 1 or k < 1:
        raise ValidationError(f"need n >= 1 and k >= 1, got n={n} k={k}")
    return n * math.log(2.0 * math.pi * rss / n) + n + 2 * k


def _fit_r2(ys: np.ndarray, rss: float) -> float:
    tss = float(np.sum((ys - ys.mean()) ** 2))
    if tss == 0.0:
        return 1.0 if rss <= _EXACT_FIT_REL * max(1.0, float(np.sum(ys * ys))) else 0.0
    return 1.0 - rss / tss


def _finish(model, ys, rss, k, converged, iterations) -> FitResult:
    scale = max(1.0, float(np.sum(ys * ys)))
    exact = rss <= _EXACT_FIT_REL * scale
    value = -math.inf if exact else aic(rss, len(ys), k)
    return FitResult(
        model=model,
        rss=float(rss),
        r_squared=_fit_r2(ys, rss),
        aic=value,
        k=k,
        n=len(ys),
        converged=converged,
        iterations=iterations,
        exact_fit=exact,
    )


# ------------------------------------------------------------------ quartic

def fit_quartic(points, options: FitOptions | None = None) -> FitResult:
    """Least squares on the degree-4 monomial basis.

    x is scaled to [-1, 1] before the orthogonal-decomposition solve and
    the coefficients are unscaled afterwards; with five distinct x the
    result interpolates.
    """
    xs, ys = _as_xy(points)
    if len(xs) < 5:
        raise TooFewPoints(f"quartic needs >= 5 points, got {len(xs)}")
    if np.all(xs == xs[0]):
        raise DegenerateX("all x values identical")
    s = float(np.max(np.abs(xs)))
    if s == 0.0:
        raise DegenerateX("all x values zero")
    basis = np.vander(xs / s, 5, increasing=True)
    scaled, *_ = np.linalg.lstsq(basis, ys, rcond=None)
    fitted = basis @ scaled
    rss = float(np.sum((ys - fitted) ** 2))
    coef = scaled / s ** np.arange(5)
    model = QuarticModel(*(float(v) for v in coef))
    return _finish(model, ys, rss, k=5, converged=True, iterations=1)


# ---------------------------------------------------------------------- 4PL

def _residual_rss(params: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, float]:
    a, b, c, d = params
    t = _sigmoid_t(xs, b, c)
    r = d + (a - d) / (1.0 + t) - ys
    return r, float(np.dot(r, r))


def _jacobian(params: np.ndarray, xs: np.ndarray) -> np.ndarray:
    a, b, c, d = params
    t = _sigmoid_t(xs, b, c)
    u = 1.0 / (1.0 + t)
    v = 1.0 - u
    logx = np.zeros_like(xs)
    pos = xs > 0
    logx[pos] = np.log(xs[pos] / c)
    jac = np.empty((len(xs), 4))
    jac[:, 0] = u
    jac[:, 1] = -(a - d) * u * v * logx
    jac[:, 2] = (a - d) * u * v * b / c
    jac[:, 3] = v
    return jac


def _clip_params(params: np.ndarray, options: FitOptions, c_max: float) -> np.ndarray:
    out = params.copy()
    out[1] = min(max(out[1], options.b_min), options.b_max)
    out[2] = min(max(out[2], options.c_min), c_max)
    return out


def _levmar(
    start: np.ndarray,
    xs: np.ndarray,
    ys: np.ndarray,
    options: FitOptions,
    c_max: float,
) -> tuple[np.ndarray, float, bool, int]:
    params = _clip_params(start, options, c_max)
    _, rss = _residual_rss(params, xs, ys)
    lam = 1e-3
    converged = False
    iterations = 0
    for iterations in range(1, options.max_iterations + 1):
        r, _ = _residual_rss(params, xs, ys)
        jac = _jacobian(params, xs)
        jtj = jac.T @ jac
        jtr = jac.T @ r
        improved = False
        for _ in range(40):
            damp = jtj + lam * np.diag(np.maximum(np.diag(jtj), 1e-12))
            try:
                step = np.linalg.solve(damp, -jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = _clip_params(params + step, options, c_max)
            _, trial_rss = _residual_rss(trial, xs, ys)
            if trial_rss < rss:
                drop = rss - trial_rss
                params, rss = trial, trial_rss
                lam = max(lam / 3.0, 1e-12)
                improved = True
                if drop <= options.tolerance * max(rss, 1e-300):
                    converged = True
                break
            lam *= 10.0
            if lam > 1e14:
                break
        if converged or not improved:
            if not improved:
                converged = True
            break
    return params, rss, converged, iterations


def _profile_seeds(
    xs: np.ndarray,
    ys: np.ndarray,
    options: FitOptions,
    c_max: float,
    count: int = 6,
) -> list[np.ndarray]:
    """Best (a, d)-profiled points of a log-spaced (b, c) grid."""
    bs = np.geomspace(options.b_min, options.b_max, 24)
    cs = np.geomspace(options.c_min, c_max, 48)
    bb, cc = np.meshgrid(bs, cs, indexing="ij")
    bb, cc = bb.ravel(), cc.ravel()
    pos = xs > 0
    logx = np.log(xs[pos])
    with np.errstate(over="ignore"):
        t = np.zeros((len(bb), len(xs)))
        t[:, pos] = np.exp(
            np.clip(bb[:, None] * (logx[None, :] - np.log(cc[:, None])), -_EXP_CLAMP, _EXP_CLAMP)
        )
    u = 1.0 / (1.0 + t)
    w = 1.0 - u
    g11 = np.sum(u * u, axis=1)
    g12 = np.sum(u * w, axis=1)
    g22 = np.sum(w * w, axis=1)
    h1 = u @ ys
    h2 = w @ ys
    det = g11 * g22 - g12 * g12
    with np.errstate(divide="ignore", invalid="ignore"):
        a = (g22 * h1 - g12 * h2) / det
        d = (g11 * h2 - g12 * h1) / det
        fitted = a[:, None] * u + d[:, None] * w
        rss = np.sum((fitted - ys[None, :]) ** 2, axis=1)
    rss = np.where((det > 1e-12) & np.isfinite(rss), rss, np.inf)
    order = np.argsort(rss, kind="stable")[:count]
    return [np.array([a[i], bb[i], cc[i], d[i]]) for i in order if np.isfinite(rss[i])]


def _heuristic_seeds(
    xs: np.ndarray,
    ys: np.ndarray,
    options: FitOptions,
) -> list[np.ndarray]:
    ymin, ymax = float(ys.min()), float(ys.max())
    xpos = xs[xs > 0]
    cmed = float(np.median(xpos)) if len(xpos) else options.c_min
    base_b = [0.5, 1.0, 2.0, 5.0]
    seeds = [np.array([ymin, b0, cmed, ymax]) for b0 in base_b]
    rng = np.random.default_rng(520)
    while len(seeds) < options.multistart_count:
        b0 = base_b[len(seeds) % len(base_b)]
        spread = max(ymax - ymin, 1e-6)
        seeds.append(
            np.array(
                [
                    ymin + 0.2 * spread * rng.standard_normal(),
                    b0 * 2.0 ** rng.standard_normal(),
                    cmed * 10.0 ** rng.uniform(-1.0, 3.0),
                    ymax + 0.2 * spread * rng.standard_normal(),
                ]
            )
        )
    return seeds[: options.multistart_count]


def fit_4pl(points, options: FitOptions | None = None) -> FitResult:
    """Best least-squares sigmoid over all starts; lowest RSS wins, ties by
    start order. converged=False means no start met the tolerance."""
    opts = options if options is not None else FitOptions()
    xs, ys = _as_xy(points)
    if len(xs) < 4:
        raise TooFewPoints(f"sigmoid needs >= 4 points, got {len(xs)}")
    if np.all(xs == xs[0]):
        raise DegenerateX("all x values identical")
    if np.any(xs < 0):
        raise ValidationError("sigmoid fit requires x >= 0")
    c_max = max(opts.c_min * 10.0, opts.c_max_factor * float(xs.max()))
    seeds = _heuristic_seeds(xs, ys, opts) + _profile_seeds(xs, ys, opts, c_max)
    best = None
    for seed in seeds:
        params, rss, converged, iterations = _levmar(seed, xs, ys, opts, c_max)
        if best is None or rss < best[1]:
            best = (params, rss, converged, iterations)
    params, rss, converged, iterations = best
    model = FourPLModel(*(float(v) for v in params))
    return _finish(model, ys, rss, k=4, converged=converged, iterations=iterations)


# ------------------------------------------------------------------ ranking

@dataclass(frozen=True)
class RankedModel:
    """compare_models entry: rank 0 is the preferred model."""

    rank: int
    fit: FitResult
    overfit_warning: bool


def compare_models(fits) -> list[RankedModel]:
    """Ascending AIC; ties broken by smaller k, then smaller rss.

    An exact-interpolation fit carries the -infinity AIC sentinel, ranks
    first, and is flagged as an overfit warning rather than a win.
    """
    fits = list(fits)
    if len(fits) < 2:
        raise MismatchedData("need >= 2 fits to rank")
    if len({f.n for f in fits}) != 1:
        raise MismatchedData(f"fits cover different point counts {[f.n for f in fits]}")
    ordered = sorted(fits, key=lambda f: (f.aic, f.k, f.rss))
    return [
        RankedModel(rank=i, fit=f, overfit_warning=f.exact_fit)
        for i, f in enumerate(ordered)
    ]


def fit_result_to_dict(fit: FitResult) -> dict:
    if isinstance(fit.model, FourPLModel):
        params = {"a": fit.model.a, "b": fit.model.b, "c": fit.model.c, "d": fit.model.d}
    else:
        params = dict(zip("abcde", fit.model.coefficients))
    return {
        "model_type": fit.model_type,
        "params": params,
        "rss": fit.rss,
        "r_squared": fit.r_squared,
        "aic": None if math.isinf(fit.aic) else fit.aic,
        "exact_fit": fit.exact_fit,
        "n": fit.n,
        "k": fit.k,
        "converged": fit.converged,
        "iterations": fit.iterations,
    }


def fit_result_to_json(fit: FitResult) -> str:
    return json.dumps(fit_result_to_dict(fit), indent=2)
