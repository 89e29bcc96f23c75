"""Partial-sum estimation of Dixmier traces.

For a compact non-negative operator with singular values mu_0 >= mu_1 >= ...
the Dixmier trace of interest here is the limit of gamma_N = sigma_N / log N
with sigma_N the N-th partial sum.  Operators are truncated block by block
in the degeneracy index, singular values (or eigenvalues) of the blocks are
merged into one sorted sequence, and gamma_N is extrapolated over a ladder
of checkpoints under the log_inverse model.  A zeta-function route
x * Tr(T^(1+x)) -> x = 0 provides the independent Tauberian cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComputationError, DomainError, RangeError
from .extrapolate import ConvergenceTable, log_inverse_fit, richardson_zero
from .operators import DiagonalWeight, WeightedProduct, matrix_block
from .traces import hurwitz_zeta

_EIGEN_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class SpectralTail:
    """Analytic model for the spectrum beyond a truncation.

    kind "shell_power" describes values (e + shift)^(-s) carried with
    multiplicity e by every shell e >= start; kind "plain_power" describes
    a simple sequence (n + shift)^(-s) for n >= start.  power_sum(p) is
    the exact tail of sum mu^p, evaluated through the Hurwitz zeta.
    """

    kind: str
    s: float
    shift: float
    start: int

    def power_sum(self, p: float) -> float:
        q = self.start + self.shift
        if self.kind == "plain_power":
            if self.s * p <= 1.0:
                raise DomainError("tail power sum diverges for s*p <= 1")
            return hurwitz_zeta(self.s * p, q)
        if self.kind == "shell_power":
            if self.s * p <= 2.0:
                raise DomainError("shell tail power sum diverges for s*p <= 2")
            return hurwitz_zeta(self.s * p - 1.0, q) - self.shift * hurwitz_zeta(self.s * p, q)
        raise DomainError("unknown tail kind %r" % (self.kind,))


def _sorted_descending(values: np.ndarray) -> np.ndarray:
    order = np.lexsort((-values.imag if np.iscomplexobj(values) else np.zeros_like(values),
                        -values.real,
                        -np.abs(values)))
    return values[order]


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    """Non-increasing singular values with provenance metadata.

    `reliable` bounds the prefix of the sorted sequence that is faithful to
    the untruncated operator (None when the whole list is); `tail` is an
    optional analytic model for everything beyond the truncation.
    """

    values: np.ndarray
    provenance: str
    reliable: int | None = None
    tail: SpectralTail | None = None

    def __post_init__(self):
        values = np.sort(np.asarray(self.values, dtype=float))[::-1].copy()
        if values.size and values[-1] < 0.0:
            raise DomainError("singular values must be non-negative")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True, eq=False)
class EigenSequence:
    """Complex eigenvalues ordered by non-increasing modulus."""

    values: np.ndarray
    provenance: str
    reliable: int | None = None
    tail: SpectralTail | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", _sorted_descending(values))

    def __len__(self) -> int:
        return int(self.values.size)


def _block_singulars(block: np.ndarray) -> np.ndarray:
    off = block - np.diag(np.diag(block))
    if not off.any():
        return np.abs(np.diag(block)).astype(float)
    return np.linalg.svd(block, compute_uv=False)


def _block_eigen(block: np.ndarray, block_id: int) -> np.ndarray:
    off = block - np.diag(np.diag(block))
    if not off.any():
        return np.diag(block).astype(complex)
    values, vectors = np.linalg.eig(block)
    if np.linalg.cond(vectors) > 1e12:
        raise ComputationError("block m=%d is numerically non-diagonalizable" % block_id)
    return values


def collect_spectrum(op, m_max: int, n_max: int, kind: str = "singular"):
    """Merged, sorted spectrum of the blocks m = 0 .. m_max at size n_max.

    For diagonal weights the values are enumerated directly; weighted
    products go through per-block SVD (kind "singular") or a dense
    eigendecomposition (kind "eigen"), with purely diagonal blocks read
    off without factorization.  The reliable prefix length is the number
    of retained values strictly above the largest value of the first
    omitted block, beyond which sorting against the truncation boundary
    would mix retained and missing contributions.
    """
    if kind not in ("singular", "eigen"):
        raise DomainError("spectrum kind must be 'singular' or 'eigen'")
    if m_max < 0 or n_max < 1:
        raise DomainError("spectrum truncation needs m_max >= 0 and n_max >= 1")
    if isinstance(op, DiagonalWeight):
        n = np.arange(n_max, dtype=float)[:, None]
        m = np.arange(m_max + 1, dtype=float)[None, :]
        grid = np.asarray(op.value(n, m), dtype=float)
        frontier_n = np.max(op.value(np.full(m_max + 2, n_max, dtype=float),
                                     np.arange(m_max + 2, dtype=float)))
        frontier_m = np.max(op.value(np.arange(n_max + 1, dtype=float),
                                     np.full(n_max + 1, m_max + 1, dtype=float)))
        threshold = float(max(frontier_n, frontier_m))
        flat = grid.ravel()
        reliable = int((np.abs(flat) > threshold).sum())
        label = "diagonal weight %s over n<%d, m<=%d" % (op.kind, n_max, m_max)
        if kind == "singular":
            return SingularSpectrum(np.abs(flat), label, reliable=reliable)
        return EigenSequence(flat.astype(complex), label, reliable=reliable)
    if not isinstance(op, WeightedProduct):
        raise DomainError("collect_spectrum expects a DiagonalWeight or WeightedProduct")
    chunks = []
    for m in range(m_max + 1):
        block = matrix_block(op, m, n_max).data
        chunks.append(_block_singulars(block) if kind == "singular"
                      else _block_eigen(block, m))
    frontier = matrix_block(op, m_max + 1, n_max).data
    threshold = float(np.linalg.norm(frontier, ord=2))
    merged = np.concatenate(chunks) if chunks else np.zeros(0)
    reliable = int((np.abs(merged) > threshold).sum())
    label = "%s-weighted product (lam=%g, lam2=%g, s=%g) over n<%d, m<=%d" % (
        op.form, op.lam, op.lam2, op.s, n_max, m_max)
    if kind == "singular":
        return SingularSpectrum(np.abs(merged), label, reliable=reliable)
    return EigenSequence(merged, label, reliable=reliable)


def shell_spectrum(weight: DiagonalWeight, shells: int, kind: str = "singular"):
    """Whole-shell spectrum of a q_power weight with its analytic tail.

    Shell e carries the value (e + lam)^(-s) with multiplicity e; keeping
    complete shells makes every checkpoint N = e(e+1)/2 comparable and the
    remainder exactly summable, which feeds the Tauberian route.
    """
    if weight.kind != "q_power":
        raise DomainError("shell enumeration applies to q_power weights only")
    if shells < 1:
        raise DomainError("at least one shell is required")
    e = np.arange(1, shells + 1, dtype=float)
    values = np.repeat((e + weight.lam) ** (-weight.s), np.arange(1, shells + 1))
    tail = SpectralTail(kind="shell_power", s=weight.s, shift=weight.lam,
                        start=shells + 1)
    label = "q_power(s=%g, lam=%g) over %d complete shells" % (weight.s, weight.lam, shells)
    if kind == "singular":
        return SingularSpectrum(values, label, reliable=values.size, tail=tail)
    return EigenSequence(values.astype(complex), label, reliable=values.size, tail=tail)


def _check_count(spectrum, count: int, minimum: int = 0) -> None:
    if count < minimum:
        raise DomainError("partial sums need at least %d terms" % minimum)
    if count > len(spectrum):
        raise RangeError("requested %d values but only %d are retained"
                         % (count, len(spectrum)))


def sigma_p(spectrum: SingularSpectrum, count: int, p: float = 1.0) -> float:
    """Partial sum of mu^p over the first `count` singular values."""
    if p < 1.0:
        raise DomainError("sigma_p is defined for p >= 1")
    _check_count(spectrum, count)
    return float((spectrum.values[:count] ** p).sum())


def gamma(spectrum: SingularSpectrum, count: int) -> float:
    """Dixmier quotient sigma_N / log N at N = count >= 2."""
    _check_count(spectrum, count, minimum=2)
    return sigma_p(spectrum, count) / math.log(count)


def calderon_norm(spectrum: SingularSpectrum) -> float:
    """sup over N >= 2 of sigma_N / log N on the retained spectrum."""
    if len(spectrum) < 2:
        raise DomainError("the Calderon quotient needs at least two values")
    sums = np.cumsum(spectrum.values)
    counts = np.arange(2, len(spectrum) + 1)
    return float(np.max(sums[1:] / np.log(counts)))


def _partial_sums(spectrum, checkpoints) -> np.ndarray:
    values = spectrum.values
    sums = np.cumsum(values)
    out = sums[np.asarray(checkpoints, dtype=int) - 1]
    if isinstance(spectrum, EigenSequence):
        drift = float(np.max(np.abs(out.imag))) if out.size else 0.0
        if drift > _EIGEN_IMAG_TOL:
            raise ComputationError(
                "eigenvalue partial sums have imaginary drift %.2e; "
                "the operator is not numerically self-adjoint" % drift)
        out = out.real
    return out.astype(float)


def checkpoint_ladder(spectrum, points: int = 6, minimum: int = 32) -> list[int]:
    """Geometric ladder of checkpoint counts within the reliable prefix."""
    top = spectrum.reliable if spectrum.reliable is not None else len(spectrum)
    top = min(top, len(spectrum))
    if top < 4:
        raise DomainError("spectrum too short for a checkpoint ladder")
    low = max(2, min(minimum, top // 8))
    ladder = np.unique(np.geomspace(low, top, points).astype(int))
    return [int(n) for n in ladder if n >= 2]


def shell_checkpoints(shells: int, points: int = 6, min_shell: int = 8) -> list[int]:
    """Checkpoints N = e(e+1)/2 at a geometric ladder of complete shells."""
    if shells < min_shell:
        raise DomainError("need at least %d shells for checkpoints" % min_shell)
    ladder = np.unique(np.geomspace(min_shell, shells, points).astype(int))
    return [int(e) * (int(e) + 1) // 2 for e in ladder]


def dixmier_estimate(spectrum, checkpoints) -> ConvergenceTable:
    """Extrapolated Dixmier trace from partial sums at the checkpoints.

    Rows hold (N, sigma_N / log N); the limit is fitted under the
    log_inverse model.  Eigenvalue sequences are summed through their real
    parts, with the imaginary drift asserted to be negligible rather than
    silently discarded.  Slow or absent convergence shows up in the
    residual; no exception is raised for it.
    """
    ns = sorted({int(n) for n in checkpoints})
    if len(ns) < 3:
        raise DomainError("the Dixmier estimator needs at least three checkpoints")
    if ns[0] < 2:
        raise DomainError("checkpoints must be at least 2")
    _check_count(spectrum, ns[-1], minimum=2)
    sums = _partial_sums(spectrum, ns)
    raw = tuple(float(s) / math.log(n) for s, n in zip(sums, ns))
    limit, _, residual = log_inverse_fit(ns, raw)
    return ConvergenceTable(params=tuple(float(n) for n in ns), raw=raw,
                            accelerated=None, extrapolated=limit.real,
                            residual=residual, model="log_inverse")


def tauberian_zeta(spectrum, x: float) -> float:
    """zeta_T(x) = sum mu^(1+x), using the analytic tail when one is known."""
    if x <= 0.0:
        raise DomainError("the Tauberian zeta needs x > 0")
    values = np.abs(spectrum.values) if isinstance(spectrum, EigenSequence) \
        else spectrum.values
    positive = values[values > 0.0]
    total = float((positive ** (1.0 + x)).sum())
    if spectrum.tail is not None:
        total += spectrum.tail.power_sum(1.0 + x)
    return total


def tauberian_residue(spectrum, x_grid) -> ConvergenceTable:
    """Residue of the spectral zeta: x * zeta_T(x) extrapolated to x = 0.

    Matching this limit against the Dixmier estimate is the measurability
    evidence: for Tauberian operators the two routes agree.
    """
    xs = sorted({float(x) for x in x_grid}, reverse=True)
    if len(xs) < 3:
        raise DomainError("the Tauberian residue needs at least three x samples")
    if xs[-1] <= 0.0:
        raise DomainError("residue samples must be positive")
    raw = tuple(x * tauberian_zeta(spectrum, x) for x in xs)
    limit, residual = richardson_zero(xs, raw)
    return ConvergenceTable(params=tuple(xs), raw=raw, accelerated=None,
                            extrapolated=limit.real, residual=residual,
                            model="richardson_x")
