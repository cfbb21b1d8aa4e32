"""Directed model with standard Gaussian edge weights, solved in closed form.

With iid standard normal weights ``x[i, j]`` on all ordered pairs and
statistics

    e = sum(x) / n**2            (directed edge density)
    s = sum_i (row_i sum)**2 / n**3   (directed out-two-star density)

the normalization constant of ``exp(n**2 * (beta1 * e + beta2 * s))`` with
respect to the prior factorizes over rows, and each row reduces to the
single Gaussian ``Y = row sum ~ Normal(0, n)``.  For ``beta2 < 1/2``:

    psi_n   = beta1**2 / (2 * (1 - 2*beta2)) - log(1 - 2*beta2) / (2*n)
    psi_inf = beta1**2 / (2 * (1 - 2*beta2))

Both are smooth in (beta1, beta2) on the whole half-plane, so this model
has no phase transition — a useful contrast with the bounded-weight case.
At ``beta2 >= 1/2`` the defining integral diverges and every operation
refuses with ``DivergenceError``.  ``psi_n_monte_carlo`` checks the closed
form by simulating the same one-dimensional reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, InputValidationError

_MODULE = "gaussian_directed"

#: Largest admissible beta2; the Gaussian integral diverges at 1/2.
BETA2_MAX = 0.5 - 1e-9


@dataclass(frozen=True)
class GaussianModelParams:
    """Edge and out-two-star parameters of the directed Gaussian model."""

    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InputValidationError(
                    f"{name} must be a finite real, got {value!r}",
                    module=_MODULE,
                    operation="GaussianModelParams",
                    offending_parameter=name,
                )
            object.__setattr__(self, name, float(value))
        if self.beta2 > BETA2_MAX:
            raise DivergenceError(
                f"beta2 = {self.beta2:g} makes the Gaussian integral diverge "
                f"(needs beta2 <= {BETA2_MAX})",
                module=_MODULE,
                operation="GaussianModelParams",
                offending_parameter="beta2",
            )


def directed_stats(weights) -> tuple[float, float]:
    """Directed edge and out-two-star densities of a square weight matrix."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
        raise InputValidationError(
            f"weights must be a square matrix, got shape {w.shape}",
            module=_MODULE,
            operation="directed_stats",
            offending_parameter="weights",
        )
    n = w.shape[0]
    rows = w.sum(axis=1)
    e = float(w.sum()) / n**2
    s = float(np.dot(rows, rows)) / n**3
    return e, s


def _check_n(n: int, operation: str) -> int:
    if not float(n).is_integer() or int(n) < 1:
        raise InputValidationError(
            f"n must be a positive integer, got {n!r}",
            module=_MODULE,
            operation=operation,
            offending_parameter="n",
        )
    return int(n)


def psi_n_exact(params: GaussianModelParams, n: int) -> float:
    """Closed-form normalization constant at finite ``n``."""
    n = _check_n(n, "psi_n_exact")
    shrink = 1.0 - 2.0 * params.beta2
    return params.beta1**2 / (2.0 * shrink) - math.log(shrink) / (2.0 * n)


def psi_inf(params: GaussianModelParams) -> float:
    """Limiting normalization constant; smooth on the whole half-plane."""
    return params.beta1**2 / (2.0 * (1.0 - 2.0 * params.beta2))


def psi_n_monte_carlo(
    params: GaussianModelParams, n: int, samples: int, seed
) -> tuple[float, float]:
    """Monte Carlo estimate of ``psi_n`` with a delta-method standard error.

    Estimates ``(1/n) * log E[exp(beta1*Y + beta2*Y**2/n)]`` over
    ``Y ~ Normal(0, n)`` by a shifted log-mean-exp, the same one-row
    reduction behind the closed form.  The returned standard error is the
    sampling error of the mean propagated through the log and the 1/n
    scaling; when the integrand has heavy tails relative to the prior the
    estimate can sit many such errors from the truth at moderate sample
    sizes.
    """
    n = _check_n(n, "psi_n_monte_carlo")
    if not float(samples).is_integer() or int(samples) < 100:
        raise InputValidationError(
            f"samples must be an integer >= 100, got {samples!r}",
            module=_MODULE,
            operation="psi_n_monte_carlo",
            offending_parameter="samples",
        )
    samples = int(samples)
    rng = np.random.default_rng(seed)
    y = rng.standard_normal(samples) * math.sqrt(n)
    exponent = params.beta1 * y + params.beta2 * y**2 / n
    shift = float(exponent.max())
    z = np.exp(exponent - shift)
    mean = float(z.mean())
    estimate = (shift + math.log(mean)) / n
    std_error = float(z.std(ddof=1)) / (mean * math.sqrt(samples)) / n
    return estimate, std_error
