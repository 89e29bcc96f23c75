"""Integrated density of states and DOS measures for Landau-type operators.

Operators here are diagonal in the Landau index with levels h_j that do
not depend on the degeneracy index, so spectral projections are finite
sums of level projections and the IDOS is the level count weighted by
idos_scale = 1/(2 pi ell^2).  The DOS is the purely atomic measure whose
distribution function is the IDOS; its pairing with compactly supported
test functions is cross-checked against the canonical trace and against
the Dixmier estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import MagneticConfig
from .dixmier import collect_spectrum, dixmier_estimate, checkpoint_ladder
from .errors import DomainError, RangeError
from .extrapolate import ConvergenceTable
from .operators import CoefficientOperator, weighted_product
from .traces import _shell_sums, tau_diagonal, _checked_n_grid


@dataclass(frozen=True)
class LandauDiagonalOperator:
    """Levels h_j for j below the truncation, plus tail information.

    eps_inf is the essential upper bound of the spectrum (the identity
    projection threshold); tail_inf is a lower bound for every level
    beyond the truncation, so spectral projections below tail_inf are
    exactly representable from the stored levels.
    """

    levels: tuple[float, ...]
    eps_inf: float = math.inf
    tail_inf: float = math.inf

    def __post_init__(self):
        if len(self.levels) < 1:
            raise DomainError("a diagonal operator needs at least one level")
        if any(not math.isfinite(h) for h in self.levels):
            raise DomainError("levels must be finite")

    @property
    def truncation(self) -> int:
        return len(self.levels)


def landau_hamiltonian(truncation: int) -> LandauDiagonalOperator:
    """Landau Hamiltonian with levels j + 1/2 for j < truncation."""
    if truncation < 1:
        raise DomainError("the Landau Hamiltonian needs at least one level")
    levels = tuple(j + 0.5 for j in range(truncation))
    return LandauDiagonalOperator(levels=levels, eps_inf=math.inf,
                                  tail_inf=truncation + 0.5)


def spectral_projection(op: LandauDiagonalOperator, eps: float) -> CoefficientOperator:
    """Projection onto levels h_j <= eps as a diagonal coefficient family.

    The threshold convention is half-open from above: a level equal to eps
    is included.  eps must stay below eps_inf (the projection would be the
    non-representable identity otherwise) and below tail_inf (levels beyond
    the truncation could not be accounted for).
    """
    if not math.isfinite(eps):
        raise DomainError("the threshold must be finite")
    if eps >= op.eps_inf:
        raise DomainError("threshold reaches eps_inf: the projection would be "
                          "the identity, which the algebra does not contain")
    if eps >= op.tail_inf:
        raise RangeError("threshold %g reaches levels beyond the truncation "
                         "(tail bound %g)" % (eps, op.tail_inf))
    entries = {(j, j): 1.0 for j, h in enumerate(op.levels) if h <= eps}
    return CoefficientOperator(entries, "L1")


def idos(op: LandauDiagonalOperator, eps: float, cfg: MagneticConfig) -> float:
    """Integrated density of states: idos_scale times the level count."""
    projection = spectral_projection(op, eps)
    return cfg.idos_scale * tau_diagonal(projection).real


@dataclass(frozen=True)
class DOSMeasure:
    """Purely atomic DOS: sorted atoms (energy, weight)."""

    atoms: tuple[tuple[float, float], ...]

    def mass(self, interval: tuple[float, float]) -> float:
        """Measure of the half-open interval (a, b]."""
        a, b = interval
        if not (a < b):
            raise DomainError("interval must satisfy a < b")
        return math.fsum(w for e, w in self.atoms if a < e <= b)

    def integrate(self, fn) -> float:
        return math.fsum(w * fn(e) for e, w in self.atoms)


def dos_measure(op: LandauDiagonalOperator, cfg: MagneticConfig) -> DOSMeasure:
    """Atomic DOS with one atom per distinct level, weight scaled by idos_scale."""
    multiplicity: dict[float, int] = {}
    for h in op.levels:
        multiplicity[h] = multiplicity.get(h, 0) + 1
    atoms = tuple((e, cfg.idos_scale * count) for e, count in sorted(multiplicity.items()))
    return DOSMeasure(atoms=atoms)


@dataclass(frozen=True)
class CompactTestFunction:
    """Continuous piecewise-linear function vanishing outside its nodes.

    Nodes are (energy, value) pairs with strictly increasing energies; the
    first and last values must vanish so the function is continuous on the
    whole line with compact support [nodes[0], nodes[-1]].
    """

    nodes: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise DomainError("a test function needs at least two nodes")
        energies = [e for e, _ in self.nodes]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise DomainError("test function nodes must be strictly increasing")
        if self.nodes[0][1] != 0.0 or self.nodes[-1][1] != 0.0:
            raise DomainError("test functions must vanish at the support endpoints")

    @property
    def support(self) -> tuple[float, float]:
        return self.nodes[0][0], self.nodes[-1][0]

    def __call__(self, eps: float) -> float:
        lo, hi = self.support
        if eps <= lo or eps >= hi:
            return 0.0
        xs = [e for e, _ in self.nodes]
        ys = [v for _, v in self.nodes]
        return float(np.interp(eps, xs, ys))


def functional_calculus(op: LandauDiagonalOperator,
                        fn: CompactTestFunction) -> CoefficientOperator:
    """Diagonal family f(H) with entries f(h_j); requires representability.

    The support must stay below eps_inf and below the tail bound, so that
    no level outside the truncation can carry a nonzero value of f.
    """
    lo, hi = fn.support
    if hi >= op.eps_inf:
        raise DomainError("test function support reaches eps_inf")
    if hi >= op.tail_inf:
        raise RangeError("test function support %g reaches levels beyond the "
                         "truncation (tail bound %g)" % (hi, op.tail_inf))
    entries = {(j, j): fn(h) for j, h in enumerate(op.levels) if fn(h) != 0.0}
    return CoefficientOperator(entries, "L1")


@dataclass(frozen=True)
class SpectralCheck:
    trace_value: float
    measure_value: float

    @property
    def gap(self) -> float:
        return abs(self.trace_value - self.measure_value)


def spectral_formula_check(op: LandauDiagonalOperator, fn: CompactTestFunction,
                           cfg: MagneticConfig) -> SpectralCheck:
    """tau(f(H)) against (omega_ell / 2) * integral of f against the DOS."""
    lhs = tau_diagonal(functional_calculus(op, fn)).real
    rhs = 0.5 * cfg.omega_ell * dos_measure(op, cfg).integrate(fn)
    return SpectralCheck(trace_value=lhs, measure_value=rhs)


def idos_shell_approx(op: LandauDiagonalOperator, eps: float, n_grid,
                      cfg: MagneticConfig) -> ConvergenceTable:
    """Energy-shell route to the IDOS.

    Raw column: (2 / (omega_ell * log N)) * sum_{j<=N} w_j(P) for the
    spectral projection P at threshold eps; it approaches the IDOS from
    above like 1/log N.  The accelerated column applies the harmonic
    rearrangement, collapsing to idos_scale times the partial diagonal
    sum, which is exact once N covers the projection.
    """
    projection = spectral_projection(op, eps)
    ns = _checked_n_grid(n_grid)
    top = ns[-1]
    sums = _shell_sums(projection, top)
    scale = 2.0 / cfg.omega_ell
    raw = tuple(scale * complex(sums[n]).real / math.log(n) for n in ns)
    counts = np.cumsum([1.0 if projection.diagonal_entry(n) != 0 else 0.0
                        for n in range(top)])
    accelerated = tuple(cfg.idos_scale * float(counts[n - 1]) for n in ns)
    from .extrapolate import log_inverse_fit

    if len(ns) >= 2:
        limit, _, residual = log_inverse_fit(ns, raw)
        model = "log_inverse"
    else:
        limit, residual, model = raw[0], float("inf"), "none"
    return ConvergenceTable(params=tuple(float(n) for n in ns),
                            raw=tuple(complex(r) for r in raw),
                            accelerated=tuple(complex(a) for a in accelerated),
                            extrapolated=complex(limit).real, residual=residual,
                            model=model)


@dataclass(frozen=True)
class DixmierDOSCheck:
    dixmier_value: float
    measure_value: float
    table: ConvergenceTable

    @property
    def gap(self) -> float:
        return abs(self.dixmier_value - self.measure_value)


def dixmier_dos_check(op: LandauDiagonalOperator, fn: CompactTestFunction,
                      cfg: MagneticConfig, form: str = "left", lam: float = 0.0,
                      lam2: float | None = None, m_max: int = 2000) -> DixmierDOSCheck:
    """Dixmier estimate of the weighted f(H) against the DOS pairing.

    Both the Dixmier trace of Q_lam^{-1} f(H) and the scaled DOS pairing
    (omega_ell / 2) * integral f dDOS reduce to sum_j f(h_j); the check
    reports the extrapolated estimate, the measure value and their gap.
    Test functions may take negative values, so the estimate sums signed
    eigenvalues rather than singular values.
    """
    family = functional_calculus(op, fn)
    weighted = weighted_product(family, form, lam, lam2, s=1.0)
    n_max = max(family.max_index + 1, 1)
    spectrum = collect_spectrum(weighted, m_max=m_max, n_max=n_max, kind="eigen")
    # Checkpoints stay in the top eighth of the reliable prefix: partial
    # sums at low counts carry a 1/log^2 curvature that the linear-in-
    # 1/log model cannot absorb, which biases the extrapolated trace.
    deep = max(64, len(spectrum))
    table = dixmier_estimate(spectrum, checkpoint_ladder(spectrum, points=6, minimum=deep))
    measure_value = 0.5 * cfg.omega_ell * dos_measure(op, cfg).integrate(fn)
    return DixmierDOSCheck(dixmier_value=float(complex(table.extrapolated).real),
                           measure_value=measure_value, table=table)
