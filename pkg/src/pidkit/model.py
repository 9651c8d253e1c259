"""Income evolution model: saturated growth, post-peak decay, Pareto tail.

A person with earning capacity sigma working against a work capital
Lambda accumulates mean income M by

    dM/dt = sigma - M / Lambda,   M(0) = 0,

whose solution saturates at sigma * Lambda. Work capital scales with
the square root of real GDP per capita, Lambda(g) = lambda_ref *
sqrt(g / g_ref), and so does the critical work experience Tc(g) at
which growth stops. Beyond Tc mean income falls exponentially at
rate beta. The population is a discrete grid of sigma levels with
weights; the portion of the grid above a threshold models the
high-income tail, whose shape within the tail is Pareto.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import MeanIncomeCurve
from .errors import DomainError
from .ingest import MicrodataSet

# Default decay rate: mean income halves over the 25 years past the peak.
DEFAULT_BETA = math.log(2.0) / 25.0


@dataclass(frozen=True)
class ModelParams:
    """Model constants and the earning-capacity grid.

    ``sigma_weights`` must sum to 1; the default grid is ten equally
    likely levels 1..10.
    """

    lambda_ref: float = 10.0
    g_ref: float = 20000.0
    tc_ref: float = 30.0
    beta: float = DEFAULT_BETA
    dt: float = 0.01
    sigma_levels: tuple[float, ...] = field(default=tuple(float(k) for k in range(1, 11)))
    sigma_weights: tuple[float, ...] = field(default=(0.1,) * 10)

    def __post_init__(self):
        for name in ("lambda_ref", "g_ref", "tc_ref", "beta", "dt"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if len(self.sigma_levels) != len(self.sigma_weights):
            raise DomainError("sigma_levels and sigma_weights must have equal length")
        if not self.sigma_levels:
            raise DomainError("sigma grid is empty")
        if any(s <= 0 for s in self.sigma_levels):
            raise DomainError("sigma levels must be positive")
        if any(w < 0 for w in self.sigma_weights):
            raise DomainError("sigma weights must be non-negative")
        if abs(sum(self.sigma_weights) - 1.0) > 1e-9:
            raise DomainError(f"sigma weights must sum to 1, got {sum(self.sigma_weights)}")

    def to_dict(self) -> dict:
        return {
            "lambda_ref": self.lambda_ref,
            "g_ref": self.g_ref,
            "tc_ref": self.tc_ref,
            "beta": self.beta,
            "dt": self.dt,
            "sigma_levels": list(self.sigma_levels),
            "sigma_weights": list(self.sigma_weights),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown model parameter(s): {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("sigma_levels", "sigma_weights"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class SimulatedCurve:
    """Population mean income over work experience for one GDP level."""

    gdp_pc: float
    critical_work_exp: float
    work_capital: float
    points: tuple[tuple[float, float], ...]

    def as_curve(self) -> MeanIncomeCurve:
        return MeanIncomeCurve(
            label=f"simulated g={self.gdp_pc:g}", points=self.points, normalized=False
        )


def work_capital(g: float, params: ModelParams = ModelParams()) -> float:
    """Lambda(g) = lambda_ref * sqrt(g / g_ref)."""
    if g <= 0:
        raise DomainError(f"GDP per capita must be positive, got {g}")
    return params.lambda_ref * math.sqrt(g / params.g_ref)


def critical_work_exp(g: float, params: ModelParams = ModelParams()) -> float:
    """Tc(g) = tc_ref * sqrt(g / g_ref)."""
    if g <= 0:
        raise DomainError(f"GDP per capita must be positive, got {g}")
    return params.tc_ref * math.sqrt(g / params.g_ref)


def closed_form_income(sigma: float, lam: float, t: float) -> float:
    """Exact solution sigma * lam * (1 - exp(-t / lam)) of the growth equation."""
    return sigma * lam * (1.0 - math.exp(-t / lam))


def _rk4_rates(m: np.ndarray, sigmas: np.ndarray, lam: float) -> np.ndarray:
    return sigmas - m / lam


def _rk4_step(m: np.ndarray, h: float, sigmas: np.ndarray, lam: float) -> np.ndarray:
    k1 = _rk4_rates(m, sigmas, lam)
    k2 = _rk4_rates(m + 0.5 * h * k1, sigmas, lam)
    k3 = _rk4_rates(m + 0.5 * h * k2, sigmas, lam)
    k4 = _rk4_rates(m + h * k3, sigmas, lam)
    return m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_income(
    sigma: float, lam: float, t_end: float, dt: float = 0.01
) -> tuple[tuple[float, float], ...]:
    """Integrate dM/dt = sigma - M/lam from M(0) = 0 with fixed-step RK4.

    Returns (t, M) at every step boundary. A final shorter step lands
    exactly on ``t_end`` when it is not a multiple of ``dt``.
    """
    if sigma <= 0 or lam <= 0:
        raise DomainError("sigma and lam must be positive")
    if t_end < 0:
        raise DomainError(f"t_end must be non-negative, got {t_end}")
    if dt <= 0:
        raise DomainError(f"dt must be positive, got {dt}")
    if dt > t_end and t_end > 0:
        raise DomainError(f"dt {dt} exceeds the integration span {t_end}")
    sigmas = np.array([sigma])
    m = np.zeros(1)
    out = [(0.0, 0.0)]
    n_full = int(math.floor(t_end / dt + 1e-12))
    for i in range(n_full):
        m = _rk4_step(m, dt, sigmas, lam)
        out.append(((i + 1) * dt, float(m[0])))
    remainder = t_end - n_full * dt
    if remainder > 1e-12:
        m = _rk4_step(m, remainder, sigmas, lam)
        out.append((t_end, float(m[0])))
    return tuple(out)


def simulate_curve(
    g: float,
    params: ModelParams = ModelParams(),
    t_end: float | None = None,
    step: float = 0.1,
) -> SimulatedCurve:
    """Population mean income curve for GDP per capita ``g``.

    Each sigma level is integrated numerically to Tc(g); beyond Tc the
    weighted mean falls as exp(-beta (t - Tc)). The sampling ``step``
    snaps to a multiple of ``params.dt``, and Tc itself is always a
    sample point, so the curve maximum sits exactly at Tc.
    """
    tc = critical_work_exp(g, params)
    lam = work_capital(g, params)
    if t_end is None:
        t_end = tc + 30.0
    if t_end <= tc:
        raise DomainError(f"t_end {t_end} must exceed the critical work experience {tc:.3f}")
    if step <= 0:
        raise DomainError(f"step must be positive, got {step}")
    every = max(1, int(round(step / params.dt)))
    step_eff = every * params.dt

    sigmas = np.array(params.sigma_levels)
    weights = np.array(params.sigma_weights)
    m = np.zeros(len(sigmas))
    points = [(0.0, 0.0)]
    n_full = int(math.floor(tc / params.dt + 1e-12))
    for i in range(n_full):
        m = _rk4_step(m, params.dt, sigmas, lam)
        if (i + 1) % every == 0:
            t = (i + 1) * params.dt
            if tc - t > 1e-9:
                points.append((t, float(weights @ m)))
    remainder = tc - n_full * params.dt
    if remainder > 1e-12:
        m = _rk4_step(m, remainder, sigmas, lam)
    peak_value = float(weights @ m)
    points.append((tc, peak_value))

    k = 1
    while tc + k * step_eff <= t_end + 1e-12:
        t = tc + k * step_eff
        points.append((t, peak_value * math.exp(-params.beta * (t - tc))))
        k += 1
    return SimulatedCurve(
        gdp_pc=g, critical_work_exp=tc, work_capital=lam, points=tuple(points)
    )


def predicted_tail_portion(
    g: float, threshold: float, t: float, params: ModelParams = ModelParams()
) -> float:
    """Weighted fraction of the sigma grid earning above ``threshold`` at time ``t``.

    Uses the exact per-sigma trajectory: saturated growth up to Tc(g),
    exponential decay after.
    """
    if threshold < 0:
        raise DomainError(f"threshold must be non-negative, got {threshold}")
    if t < 0:
        raise DomainError(f"work experience must be non-negative, got {t}")
    tc = critical_work_exp(g, params)
    lam = work_capital(g, params)
    portion = 0.0
    for sigma, weight in zip(params.sigma_levels, params.sigma_weights):
        if t <= tc:
            income = closed_form_income(sigma, lam, t)
        else:
            income = closed_form_income(sigma, lam, tc) * math.exp(-params.beta * (t - tc))
        if income > threshold:
            portion += weight
    return portion


def pareto_quantile(u: float, k: float, x_m: float) -> float:
    """Inverse-transform a uniform draw into a Pareto(k, x_m) income."""
    if not 0 < u <= 1:
        raise DomainError(f"uniform draw must be in (0, 1], got {u}")
    if k <= 0 or x_m <= 0:
        raise DomainError("Pareto index and scale must be positive")
    return x_m * u ** (-1.0 / k)


def sample_pareto(k: float, x_m: float, n: int, seed: int = 0) -> MicrodataSet:
    """Draw a reproducible Pareto(k, x_m) income sample of size n.

    Requires k > 1 so the sample mean estimates k * x_m / (k - 1).
    Returned as a unit-weight microdata set (all records at the youngest
    working age) so inequality statistics apply directly.
    """
    if k <= 1:
        raise DomainError(f"Pareto index must exceed 1 for a finite mean, got {k}")
    if x_m <= 0:
        raise DomainError(f"scale must be positive, got {x_m}")
    if n < 1:
        raise DomainError(f"sample size must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(n)  # in (0, 1], keeps the transform finite
    incomes = x_m * u ** (-1.0 / k)
    records = tuple((15, float(x), 1.0) for x in incomes)
    return MicrodataSet(country="synthetic", year=0, records=records)
