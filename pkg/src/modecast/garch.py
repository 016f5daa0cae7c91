"""Conditional-volatility modeling and the stationarity diagnostics around it.

The variance recursion is

    sigma2_t = alpha0 + sum_i alphas[i] * a_{t-i}^2 + sum_j betas[j] * sigma2_{t-j}

over zero-mean shocks a_t, with alpha0 > 0, all lag coefficients >= 0 and
0 < sum(alphas) + sum(betas) <= 1.  Fitting maximizes the Gaussian
log-likelihood with a Nelder-Mead search over transformed parameters that
satisfy the constraint set by construction: alpha0 = exp(theta0) and the lag
coefficients are softmax(weights) scaled by sigmoid(theta_s), so their sum
always lands in (0, 1).  Residuals are normalized to unit sample variance
before the search and alpha0 is scaled back afterwards, which makes the fit
scale-equivariant to rounding error.

Diagnostics: an augmented Dickey-Fuller unit-root regression (constant term,
fixed 5% asymptotic critical value -2.86) and the Lagrange-multiplier test
for conditional heteroskedasticity (T * R^2 of squared values on their own
lags against the chi-squared 95% quantile).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize, signal, stats

from .errors import (
    DegenerateSeries,
    InvalidParams,
    SingularRegression,
    TooShort,
)
from .series import TimeSeries

ADF_CRITICAL_5PCT = -2.86  # asymptotic, constant-only regression


@dataclass(frozen=True)
class GarchSpec:
    """Model order: k lagged squared shocks, l lagged variances."""

    k: int
    l: int

    def __post_init__(self):
        if self.k < 0 or self.l < 0 or self.k + self.l < 1:
            raise InvalidParams(f"need k >= 0, l >= 0, k + l >= 1, got k={self.k}, l={self.l}")


@dataclass(frozen=True)
class GarchParams:
    """Recursion coefficients constrained to the stationarity region."""

    alpha0: float
    alphas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alphas", np.asarray(self.alphas, dtype=float).reshape(-1))
        object.__setattr__(self, "betas", np.asarray(self.betas, dtype=float).reshape(-1))
        if not (self.alpha0 > 0):
            raise InvalidParams(f"alpha0 must be > 0, got {self.alpha0}")
        if (self.alphas < 0).any() or (self.betas < 0).any():
            raise InvalidParams("lag coefficients must be >= 0")
        s = self.persistence
        if not (0.0 < s <= 1.0):
            raise InvalidParams(f"coefficient sum must be in (0, 1], got {s}")

    @property
    def k(self) -> int:
        return int(self.alphas.size)

    @property
    def l(self) -> int:
        return int(self.betas.size)

    @property
    def persistence(self) -> float:
        return float(self.alphas.sum() + self.betas.sum())


@dataclass(frozen=True)
class GarchFit:
    """Fitted parameters plus the in-sample conditional-variance path.

    `used_differencing` marks volatility extracted from the first-differenced
    series (taken when the level series fails the unit-root rejection);
    `used_rolling_fallback` marks a rolling-std substitute path after an
    optimizer failure.  `sigma2_path` always has the length of `residuals`.
    """

    params: GarchParams
    sigma2_path: np.ndarray
    residuals: np.ndarray
    log_likelihood: float
    mean: float
    converged: bool
    used_differencing: bool = False
    used_rolling_fallback: bool = False


@dataclass(frozen=True)
class DiagnosticsReport:
    adf_statistic: float
    adf_reject_unit_root: bool
    arch_lm_statistic: float
    arch_effects_present: bool
    lags_used: int


@dataclass(frozen=True)
class FitOptions:
    """Deterministic optimizer settings; identical options give identical fits."""

    max_iter: int | None = None  # None: 200 * dim iterations, 500 * dim above 8 dims
    xatol: float = 1e-5
    fatol: float = 1e-8
    adf_lags: int = 12
    allow_differencing: bool = True


def sigma2_path(params: GarchParams, residuals) -> np.ndarray:
    """Run the variance recursion over `residuals`.

    Pre-sample squared shocks and variances are both seeded with the sample
    variance of the residuals, so the first output value is fully determined
    by the coefficients and that seed.
    """
    a = np.asarray(residuals, dtype=float).reshape(-1)
    n = a.size
    if n < 1:
        raise TooShort("need at least one residual")
    if not np.isfinite(a).all():
        raise InvalidParams("residuals contain non-finite values")
    k, l = params.k, params.l
    seed = float(np.var(a))
    m = max(k, l, 1)
    a2x = np.concatenate([np.full(m, seed), a * a])
    base = np.full(n, params.alpha0)
    if k > 0:
        conv = np.convolve(a2x, params.alphas)
        base = base + conv[m - 1:m - 1 + n]
    if l == 0:
        return base
    # s2_t - sum_j betas[j] * s2_{t-j} = base_t is an IIR filter over base
    denom = np.concatenate([[1.0], -params.betas])
    zi = signal.lfiltic([1.0], denom, y=np.full(l, seed))
    s2, _ = signal.lfilter([1.0], denom, base, zi=zi)
    return s2


def log_likelihood(params: GarchParams, residuals) -> float:
    """Gaussian log-likelihood sum_t [-ln(2*pi)/2 - ln(s2_t)/2 - a_t^2/(2*s2_t)]."""
    a = np.asarray(residuals, dtype=float).reshape(-1)
    s2 = sigma2_path(params, a)
    return float(np.sum(-0.5 * math.log(2.0 * math.pi) - 0.5 * np.log(s2) - (a * a) / (2.0 * s2)))


def forecast_sigma2(fit: GarchFit) -> float:
    """One-step-ahead conditional variance from the fitted paths."""
    return step_sigma2(fit.params, fit.residuals, fit.sigma2_path)


def step_sigma2(params: GarchParams, residuals, s2_path) -> float:
    """Advance the recursion one slot past the end of the given paths."""
    a = np.asarray(residuals, dtype=float).reshape(-1)
    s2 = np.asarray(s2_path, dtype=float).reshape(-1)
    k, l = params.k, params.l
    if a.size < k or s2.size < l:
        raise TooShort(f"need {k} residuals and {l} variances, got {a.size} and {s2.size}")
    out = params.alpha0
    for i in range(1, k + 1):
        out += params.alphas[i - 1] * a[-i] ** 2
    for j in range(1, l + 1):
        out += params.betas[j - 1] * s2[-j]
    return float(out)


def simulate(params: GarchParams, n: int, seed: int) -> TimeSeries:
    """Draw a length-n shock series a_t = sigma_t * xi_t with Gaussian xi.

    A 500-sample burn-in is generated and discarded; output is deterministic
    per seed.
    """
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    burn = 500
    total = n + burn
    xi = rng.standard_normal(total)
    k, l = params.k, params.l
    s = params.persistence
    seed_var = params.alpha0 / (1.0 - s) if s < 1.0 else params.alpha0 * 100.0
    m = max(k, l, 1)
    a2 = np.full(total + m, seed_var)
    s2 = np.full(total + m, seed_var)
    a = np.empty(total)
    alphas, betas = params.alphas, params.betas
    for t in range(total):
        var_t = params.alpha0
        for i in range(k):
            var_t += alphas[i] * a2[t + m - 1 - i]
        for j in range(l):
            var_t += betas[j] * s2[t + m - 1 - j]
        s2[t + m] = var_t
        a[t] = math.sqrt(var_t) * xi[t]
        a2[t + m] = a[t] * a[t]
    return TimeSeries(a[burn:], name=f"garch_sim_seed{seed}")


# ---------------------------------------------------------------------------
# Maximum-likelihood fit
# ---------------------------------------------------------------------------

def _theta_to_params(theta: np.ndarray, spec: GarchSpec) -> GarchParams:
    alpha0 = math.exp(min(theta[0], 50.0))
    total = 1.0 / (1.0 + math.exp(-theta[1]))
    w = theta[2:] - theta[2:].max()
    p = np.exp(w)
    p /= p.sum()
    coeffs = total * p
    return GarchParams(alpha0=alpha0, alphas=coeffs[:spec.k], betas=coeffs[spec.k:])


def _params_to_theta(alpha0: float, coeffs: np.ndarray) -> np.ndarray:
    total = float(coeffs.sum())
    logits = np.log(np.maximum(coeffs, 1e-12) / total)
    return np.concatenate([[math.log(alpha0), math.log(total / (1.0 - total))], logits])


def _start_points(spec: GarchSpec) -> list[np.ndarray]:
    # three fixed starts by total persistence; block shares split evenly
    starts = []
    for total, arch_share in ((0.90, 0.11), (0.50, 0.50), (0.10, 0.50)):
        coeffs = np.empty(spec.k + spec.l)
        if spec.k == 0:
            coeffs[:] = total / spec.l
        elif spec.l == 0:
            coeffs[:] = total / spec.k
        else:
            coeffs[:spec.k] = total * arch_share / spec.k
            coeffs[spec.k:] = total * (1.0 - arch_share) / spec.l
        starts.append(_params_to_theta(1.0 * (1.0 - total), coeffs))
    return starts


def _rolling_sigma2(a: np.ndarray, window: int = 12) -> np.ndarray:
    """Centered rolling variance with a positivity floor; fit fallback."""
    n = a.size
    half = window // 2
    out = np.empty(n)
    for t in range(n):
        seg = a[max(0, t - half):min(n, t + half + 1)]
        out[t] = float(np.var(seg))
    floor = max(1e-12, 1e-4 * float(np.var(a)))
    return np.maximum(out, floor)


def fit(residual_source: TimeSeries | np.ndarray, spec: GarchSpec,
        options: FitOptions = FitOptions()) -> GarchFit:
    """Demean the series and maximize the Gaussian likelihood over the constraint set.

    If the demeaned series does not reject a unit root at 5%, volatility is
    extracted from the first-differenced series instead (path length is
    re-aligned by repeating its first value).  If no restart converges, a
    centered rolling-std path is substituted.  Deterministic for fixed options.
    """
    x = residual_source.values if isinstance(residual_source, TimeSeries) else \
        np.asarray(residual_source, dtype=float).reshape(-1)
    n = x.size
    floor = max(spec.k, spec.l) + 2
    if n < floor:
        raise TooShort(f"need at least {floor} observations for ({spec.k},{spec.l}), got {n}")
    if float(np.var(x)) == 0.0:
        raise DegenerateSeries("zero-variance series")

    used_differencing = False
    work = x
    if options.allow_differencing and n >= 40:
        lags = min(options.adf_lags, max(1, n // 20))
        try:
            _, reject = adf_test(work - work.mean(), lags=lags)
        except (TooShort, SingularRegression):
            reject = True
        if not reject:
            work = np.diff(x)
            used_differencing = True

    mean = float(work.mean())
    a = work - mean
    scale = float(np.std(a))
    if scale == 0.0:
        raise DegenerateSeries("zero-variance series after demeaning")
    a_norm = a / scale

    dim = 2 + spec.k + spec.l
    if options.max_iter is not None:
        max_iter = options.max_iter
    else:
        max_iter = 200 * dim if dim <= 8 else 500 * dim

    def objective(theta: np.ndarray) -> float:
        try:
            return -log_likelihood(_theta_to_params(theta, spec), a_norm)
        except (InvalidParams, FloatingPointError, OverflowError):
            return 1e300

    best_ll = -math.inf
    best_theta = None
    converged = False
    start_lls = []
    for theta0 in _start_points(spec):
        start_lls.append(-objective(theta0))
        res = optimize.minimize(
            objective, theta0, method="Nelder-Mead",
            options={"maxiter": max_iter, "xatol": options.xatol,
                     "fatol": options.fatol, "adaptive": dim > 6},
        )
        converged = converged or bool(res.success)
        if -res.fun > best_ll:  # simplex never returns worse than its start
            best_ll = -res.fun
            best_theta = res.x

    params_norm = _theta_to_params(best_theta, spec)

    # The likelihood is flat in the lag coefficients along alpha ~ 0 (any
    # persistence reproduces a near-constant variance path), so dynamics are
    # kept only when they beat the constant-variance boundary by a BIC-style
    # margin; otherwise collapse to the near-constant point on the ridge.
    n_obs = a_norm.size
    coeffs_flat = np.full(spec.k + spec.l, 0.01 / (spec.k + spec.l))
    flat_norm = GarchParams(alpha0=0.99, alphas=coeffs_flat[:spec.k], betas=coeffs_flat[spec.k:])
    ll_flat = log_likelihood(flat_norm, a_norm)
    margin = 0.5 * math.log(n_obs) * (spec.k + spec.l)
    if best_ll - ll_flat < margin and ll_flat >= max(start_lls):
        params_norm = flat_norm
    params = replace(params_norm, alpha0=params_norm.alpha0 * scale * scale)
    s2 = sigma2_path(params, a)
    ll = log_likelihood(params, a)
    used_rolling = False
    if not converged:
        s2 = _rolling_sigma2(a)
        used_rolling = True
    if used_differencing:
        s2 = np.concatenate([[s2[0]], s2])  # re-align with the level series length
        a = np.concatenate([[a[0]], a])
    return GarchFit(
        params=params, sigma2_path=s2, residuals=a, log_likelihood=ll, mean=mean,
        converged=converged, used_differencing=used_differencing,
        used_rolling_fallback=used_rolling,
    )


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def _ols(y: np.ndarray, x_mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Least squares with rank check; returns (coef, fitted, rss)."""
    coef, _, rank, _ = np.linalg.lstsq(x_mat, y, rcond=None)
    if rank < x_mat.shape[1]:
        raise SingularRegression(f"regressor matrix rank {rank} < {x_mat.shape[1]}")
    fitted = x_mat @ coef
    rss = float(((y - fitted) ** 2).sum())
    return coef, fitted, rss


def adf_test(series: TimeSeries | np.ndarray, lags: int) -> tuple[float, bool]:
    """Augmented Dickey-Fuller regression with constant term.

    Regresses dy_t on [1, y_{t-1}, dy_{t-1} .. dy_{t-lags}]; rejection of the
    unit root is flagged when the t-statistic on y_{t-1} falls below -2.86.
    """
    y = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float).reshape(-1)
    if lags < 1:
        raise ValueError(f"lags must be >= 1, got {lags}")
    n = y.size
    if n < lags + 10:
        raise TooShort(f"need at least {lags + 10} observations for {lags} lags, got {n}")
    dy = np.diff(y)
    rows = dy.size - lags
    x_mat = np.empty((rows, 2 + lags))
    x_mat[:, 0] = 1.0
    x_mat[:, 1] = y[lags:-1]
    for i in range(1, lags + 1):
        x_mat[:, 1 + i] = dy[lags - i:-i]
    target = dy[lags:]
    coef, _, rss = _ols(target, x_mat)
    dof = rows - x_mat.shape[1]
    if dof < 1:
        raise TooShort("not enough observations for the lag count")
    s2 = rss / dof
    try:
        xtx_inv = np.linalg.inv(x_mat.T @ x_mat)
    except np.linalg.LinAlgError as exc:
        raise SingularRegression(str(exc)) from exc
    se = math.sqrt(s2 * xtx_inv[1, 1])
    stat = float(coef[1] / se)
    return stat, stat < ADF_CRITICAL_5PCT


def arch_lm_test(series: TimeSeries | np.ndarray, lags: int = 12) -> tuple[float, bool]:
    """Lagrange-multiplier test for conditional heteroskedasticity.

    Regresses squared demeaned values on their own lags; the statistic is
    nobs * R^2, compared to the chi-squared(lags) 95% quantile.
    """
    y = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float).reshape(-1)
    if lags < 1:
        raise ValueError(f"lags must be >= 1, got {lags}")
    n = y.size
    if n < lags + 10:
        raise TooShort(f"need at least {lags + 10} observations for {lags} lags, got {n}")
    z = (y - y.mean()) ** 2
    rows = n - lags
    x_mat = np.empty((rows, 1 + lags))
    x_mat[:, 0] = 1.0
    for i in range(1, lags + 1):
        x_mat[:, i] = z[lags - i:-i]
    target = z[lags:]
    _, _, rss = _ols(target, x_mat)
    tss = float(((target - target.mean()) ** 2).sum())
    if tss == 0.0:
        raise SingularRegression("squared series is constant")
    r2 = 1.0 - rss / tss
    stat = float(rows * r2)
    crit = float(stats.chi2.ppf(0.95, lags))
    return stat, stat > crit


def diagnose(series: TimeSeries | np.ndarray, lags: int = 12) -> DiagnosticsReport:
    """Run both stationarity diagnostics with a shared lag count."""
    adf_stat, adf_reject = adf_test(series, lags=lags)
    lm_stat, lm_present = arch_lm_test(series, lags=lags)
    return DiagnosticsReport(
        adf_statistic=adf_stat,
        adf_reject_unit_root=adf_reject,
        arch_lm_statistic=lm_stat,
        arch_effects_present=lm_present,
        lags_used=lags,
    )
