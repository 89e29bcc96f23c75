"""Convergence tables and the two extrapolation models used throughout.

Every limit computed in this package is reported as a ConvergenceTable:
the raw sequence of estimates, an optional accelerated column, the
extrapolated limit, and a residual quantifying how well the declared
model fits.  Model "richardson_x" removes polynomial error terms in a
small parameter x -> 0+ by Neville elimination; "log_inverse" fits
value(N) = L + c / log N by least squares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MODELS = ("richardson_x", "log_inverse", "none")


@dataclass(frozen=True)
class ConvergenceTable:
    params: tuple[float, ...]
    raw: tuple[complex, ...]
    accelerated: tuple[complex, ...] | None
    extrapolated: complex
    residual: float
    model: str

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError("unknown convergence model %r" % (self.model,))
        if len(self.raw) != len(self.params):
            raise DomainError("raw column length must match the parameter column")
        if self.accelerated is not None and len(self.accelerated) != len(self.params):
            raise DomainError("accelerated column length must match the parameter column")

    def rows(self):
        acc = self.accelerated or (None,) * len(self.params)
        return list(zip(self.params, self.raw, acc))

    @property
    def converged(self) -> bool:
        """Heuristic flag: the fit residual is small on the scale of the limit."""
        return self.residual <= 0.05 * (1.0 + abs(self.extrapolated))


def richardson_zero(xs, ys) -> tuple[complex, float]:
    """Neville extrapolation of samples (x_i, y_i) to x = 0.

    Returns the full-order extrapolant and a residual given by its distance
    from the order-reduced extrapolant (last column dropped).  Requires at
    least two distinct positive abscissae; values may be complex.
    """
    xs = [float(x) for x in xs]
    table = [complex(y) for y in ys]
    count = len(xs)
    if count < 2:
        raise DomainError("Richardson extrapolation needs at least two samples")
    if len(set(xs)) != count:
        raise DomainError("Richardson abscissae must be distinct")
    previous = table[0]
    for k in range(1, count):
        for i in range(count - k):
            table[i] = (xs[i] * table[i + 1] - xs[i + k] * table[i]) / (xs[i] - xs[i + k])
        if k == count - 2:
            previous = table[0]
    return table[0], abs(table[0] - previous)


def log_inverse_fit(params, values) -> tuple[complex, complex, float]:
    """Least-squares fit of value = L + c / log(param); returns (L, c, rms)."""
    p = np.asarray([float(x) for x in params], dtype=float)
    v = np.asarray([complex(y) for y in values], dtype=complex)
    if p.size < 2:
        raise DomainError("log-inverse fit needs at least two rows")
    if np.any(p <= 1.0):
        raise DomainError("log-inverse fit needs parameters above 1")
    design = np.column_stack([np.ones_like(p), 1.0 / np.log(p)])
    coef, *_ = np.linalg.lstsq(design.astype(complex), v, rcond=None)
    fit = design @ coef
    rms = float(np.sqrt(np.mean(np.abs(fit - v) ** 2)))
    return complex(coef[0]), complex(coef[1]), rms
