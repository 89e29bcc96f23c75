"""Coefficient calculus for operators commuting with magnetic translations.

An operator is stored as a sparse family a_{j,k} of coefficients over the
transition operators T_{j->k} that map the Landau index j to k while acting
as the identity on the degeneracy index.  The family obeys

    adjoint:  (T_{j->k})^* = T_{k->j}
    product:  T_{j->k} T_{m->n} = delta_{j,n} T_{m->k}

so composition and adjoints reduce to index bookkeeping.  The algebra has
no identity element: the would-be identity sum over all projections is not
a finite coefficient family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError

OPERATOR_CLASSES = ("L1", "L2", "Itau", "unclassified")


class CoefficientOperator:
    """Sparse coefficient family {(j, k): a_jk} plus a declared class.

    The declared class ("L1", "L2", "Itau" or "unclassified") is advisory
    metadata: it records which summability hypothesis the caller claims,
    and operations never silently reclassify beyond obvious bookkeeping.
    Instances are treated as immutable after construction.
    """

    __slots__ = ("entries", "declared_class")

    def __init__(self, entries: Mapping[tuple[int, int], complex] | None = None,
                 declared_class: str = "unclassified"):
        if declared_class not in OPERATOR_CLASSES:
            raise DomainError("declared class must be one of %s" % (OPERATOR_CLASSES,))
        cleaned: dict[tuple[int, int], complex] = {}
        for key, value in (entries or {}).items():
            j, k = key
            if j < 0 or k < 0 or j != int(j) or k != int(k):
                raise DomainError("transition indices must be non-negative integers")
            value = complex(value)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise DomainError("coefficient at (%d, %d) is not finite" % (j, k))
            if value != 0:
                cleaned[(int(j), int(k))] = value
        self.entries = cleaned
        self.declared_class = declared_class

    # -- constructors -------------------------------------------------

    @classmethod
    def transition(cls, j: int, k: int, value: complex = 1.0,
                   declared_class: str = "L1") -> "CoefficientOperator":
        return cls({(j, k): value}, declared_class)

    @classmethod
    def projection(cls, j: int) -> "CoefficientOperator":
        """Spectral projection onto Landau level j (a diagonal transition)."""
        return cls({(j, j): 1.0}, "L1")

    @classmethod
    def diagonal(cls, values, declared_class: str = "L1") -> "CoefficientOperator":
        """Diagonal operator from a sequence or {index: value} mapping."""
        if isinstance(values, Mapping):
            data = {(int(n), int(n)): v for n, v in values.items()}
        else:
            data = {(n, n): v for n, v in enumerate(values)}
        return cls(data, declared_class)

    @classmethod
    def identity(cls) -> "CoefficientOperator":
        raise DomainError("the algebra is non-unital: no identity is representable "
                          "as a summable coefficient family")

    # -- bookkeeping ---------------------------------------------------

    @property
    def max_index(self) -> int:
        """Largest Landau index appearing in the support, -1 when empty."""
        if not self.entries:
            return -1
        return max(max(j, k) for j, k in self.entries)

    @property
    def is_diagonal(self) -> bool:
        return all(j == k for j, k in self.entries)

    def diagonal_entry(self, n: int) -> complex:
        return self.entries.get((n, n), 0.0 + 0.0j)

    def diagonal_array(self, count: int) -> np.ndarray:
        out = np.zeros(count, dtype=complex)
        for (j, k), v in self.entries.items():
            if j == k and j < count:
                out[j] = v
        return out

    def __add__(self, other: "CoefficientOperator") -> "CoefficientOperator":
        merged = dict(self.entries)
        for key, value in other.entries.items():
            merged[key] = merged.get(key, 0.0) + value
        cls = self.declared_class if self.declared_class == other.declared_class else "unclassified"
        return CoefficientOperator(merged, cls)

    def __sub__(self, other: "CoefficientOperator") -> "CoefficientOperator":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "CoefficientOperator":
        scalar = complex(scalar)
        return CoefficientOperator({k: scalar * v for k, v in self.entries.items()},
                                   self.declared_class)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return "CoefficientOperator(%d entries, class=%s)" % (len(self.entries),
                                                              self.declared_class)


def adjoint(a: CoefficientOperator) -> CoefficientOperator:
    """Coefficient family of the adjoint: entry (j, k) becomes conj at (k, j)."""
    return CoefficientOperator({(k, j): np.conjugate(v) for (j, k), v in a.entries.items()},
                               a.declared_class)


def compose(a: CoefficientOperator, b: CoefficientOperator) -> CoefficientOperator:
    """Coefficients of the product AB.

    The transition relations give (AB)_{m,k} = sum_j a_{j,k} b_{m,j}: the
    outgoing index of B must meet the incoming index of A.
    """
    by_target: dict[int, list[tuple[int, complex]]] = {}
    for (m, j), v in b.entries.items():
        by_target.setdefault(j, []).append((m, v))
    out: dict[tuple[int, int], complex] = {}
    for (j, k), av in a.entries.items():
        for m, bv in by_target.get(j, ()):
            key = (m, k)
            out[key] = out.get(key, 0.0) + av * bv
    cls = "unclassified"
    if a.declared_class == "L2" and b.declared_class == "L2":
        cls = "Itau"
    elif a.declared_class == "L1" and b.declared_class == "L1":
        cls = "L1"
    return CoefficientOperator(out, cls)


def lp_norm(a: CoefficientOperator, p: float) -> float:
    """Coefficient lp norm (sum |a_jk|^p)^(1/p); requires p >= 1."""
    if p < 1.0:
        raise DomainError("lp norms of coefficient families require p >= 1")
    if not a.entries:
        return 0.0
    mags = np.abs(np.fromiter(a.entries.values(), dtype=complex, count=len(a.entries)))
    if math.isinf(p):
        return float(mags.max())
    return float((mags ** p).sum() ** (1.0 / p))


@dataclass(frozen=True)
class DiagonalWeight:
    """Diagonal operator in the doubly indexed basis, given by value(n, m).

    Three kinds are supported:
      * q_power: (n + m + 1 + lam) ** (-s), the inverse power of the
        shifted harmonic oscillator; requires s > 0 and lam > -1.
      * m_power: (m + 1) ** r, a weight in the degeneracy index only.
      * shell_function: an arbitrary tagged function of (n, m).
    """

    kind: str
    s: float = 0.0
    lam: float = 0.0
    r: float = 0.0
    tag: str = ""
    fn: Callable[[int, int], float] | None = field(default=None, compare=False)

    @classmethod
    def q_power(cls, s: float, lam: float = 0.0) -> "DiagonalWeight":
        if s <= 0.0:
            raise DomainError("q_power exponent must be positive")
        if lam <= -1.0:
            raise DomainError("lambda must exceed -1: the shifted oscillator "
                              "Q + lambda*1 is invertible only for lambda > -1")
        return cls(kind="q_power", s=float(s), lam=float(lam))

    @classmethod
    def m_power(cls, r: float) -> "DiagonalWeight":
        return cls(kind="m_power", r=float(r))

    @classmethod
    def shell_function(cls, tag: str, fn: Callable[[int, int], float]) -> "DiagonalWeight":
        return cls(kind="shell_function", tag=tag, fn=fn)

    def value(self, n, m):
        """Weight at (n, m); broadcasts over numpy arrays."""
        if self.kind == "q_power":
            return (np.asarray(n, dtype=float) + np.asarray(m, dtype=float)
                    + 1.0 + self.lam) ** (-self.s)
        if self.kind == "m_power":
            return (np.asarray(m, dtype=float) + 1.0) ** self.r
        return self.fn(n, m)


WEIGHT_FORMS = ("left", "right", "split")


@dataclass(frozen=True)
class WeightedProduct:
    """Inverse-oscillator weight combined with a coefficient operator.

    form "left" is Q_lam^{-s} S, "right" is S Q_lam^{-s} and "split" is
    Q_lam^{-s/..} on both sides: value^{1/2} S value'^{1/2} with shifts
    lam and lam2.  All blocks stay diagonal in the degeneracy index m.
    """

    source: CoefficientOperator
    form: str
    lam: float
    lam2: float
    s: float


def weighted_product(source: CoefficientOperator, form: str, lam: float,
                     lam2: float | None = None, s: float = 1.0) -> WeightedProduct:
    if form not in WEIGHT_FORMS:
        raise DomainError("weight form must be one of %s" % (WEIGHT_FORMS,))
    if s <= 0.0:
        raise DomainError("weight exponent s must be positive")
    if lam2 is None:
        lam2 = lam
    for shift in (lam, lam2):
        if shift <= -1.0:
            raise DomainError("lambda must exceed -1: the shifted oscillator "
                              "Q + lambda*1 is invertible only for lambda > -1")
    return WeightedProduct(source=source, form=form, lam=float(lam),
                           lam2=float(lam2), s=float(s))


@dataclass(frozen=True, eq=False)
class TruncatedMatrix:
    """Finite block of an operator at fixed degeneracy index m."""

    m: int
    data: np.ndarray

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.data))


def _coefficient_block(a: CoefficientOperator, count: int) -> np.ndarray:
    """Matrix of the m-independent block: entry (n, n') equals a_{n',n}."""
    block = np.zeros((count, count), dtype=complex)
    for (j, k), v in a.entries.items():
        if k < count and j < count:
            block[k, j] = v
    return block


def matrix_block(op, m: int, count: int) -> TruncatedMatrix:
    """Truncated matrix of `op` on the block with degeneracy index m.

    Rows and columns run over the Landau indices n, n' in [0, count).
    Accepts a CoefficientOperator, a DiagonalWeight or a WeightedProduct.
    """
    if m < 0:
        raise DomainError("block index m must be non-negative")
    if count < 1:
        raise DomainError("truncation size must be at least 1")
    n = np.arange(count)
    if isinstance(op, CoefficientOperator):
        return TruncatedMatrix(m=m, data=_coefficient_block(op, count))
    if isinstance(op, DiagonalWeight):
        return TruncatedMatrix(m=m, data=np.diag(np.asarray(op.value(n, m), dtype=float)
                                                 .astype(complex)))
    if isinstance(op, WeightedProduct):
        block = _coefficient_block(op.source, count)
        w = (n + float(m) + 1.0 + op.lam) ** (-op.s)
        w2 = (n + float(m) + 1.0 + op.lam2) ** (-op.s)
        if op.form == "left":
            data = w[:, None] * block
        elif op.form == "right":
            data = block * w[None, :]
        else:
            data = np.sqrt(w)[:, None] * block * np.sqrt(w2)[None, :]
        return TruncatedMatrix(m=m, data=data)
    raise DomainError("unsupported operand type for matrix_block: %r" % type(op))


def absorb_product(a1: CoefficientOperator, t_entries: Mapping[tuple[int, int], complex],
                   a2: CoefficientOperator) -> CoefficientOperator:
    """Coefficients of A1 T A2 for a bounded T given by entries t_{j,k}.

    Both coefficient factors must be declared summable ("L1"); the result
    entry at (p, s) is sum_{r,q} a1_{r,s} t_{q,r} a2_{p,q}, and its l1 norm
    is bounded by ||T|| * ||a1||_1 * ||a2||_1.
    """
    for factor, name in ((a1, "a1"), (a2, "a2")):
        if factor.declared_class != "L1":
            raise DomainError("absorb_product requires %s declared L1, got %s"
                              % (name, factor.declared_class))
    out: dict[tuple[int, int], complex] = {}
    t_by_row: dict[int, list[tuple[int, complex]]] = {}
    for (j, k), v in t_entries.items():
        t_by_row.setdefault(j, []).append((k, v))
    for (r, s), v1 in a1.entries.items():
        for (p, q), v2 in a2.entries.items():
            for k, tv in t_by_row.get(q, ()):
                if k == r:
                    key = (p, s)
                    out[key] = out.get(key, 0.0) + v1 * tv * v2
    return CoefficientOperator(out, "L1")


@dataclass(frozen=True)
class BoundCheck:
    max_entry: float
    block_norm: float

    @property
    def margin(self) -> float:
        return self.block_norm - self.max_entry


def coefficient_bound_check(t_entries: Mapping[tuple[int, int], complex],
                            count: int) -> BoundCheck:
    """Entry bound |t_{n,k}| <= ||T|| tested against a covering block.

    The spectral norm of any truncation bounds each matrix entry from
    above, so margin >= 0 certifies the stored entries against the block
    norm estimate.  `count` must cover the support of the entries.
    """
    if count < 1:
        raise DomainError("truncation size must be at least 1")
    op = CoefficientOperator(dict(t_entries), "unclassified")
    if op.max_index >= count:
        raise DomainError("truncation %d does not cover entries up to index %d"
                          % (count, op.max_index))
    block = _coefficient_block(op, count)
    norm = float(np.linalg.norm(block, ord=2)) if count else 0.0
    max_entry = float(max((abs(v) for v in op.entries.values()), default=0.0))
    return BoundCheck(max_entry=max_entry, block_norm=norm)


@dataclass(frozen=True)
class HSKernelReport:
    """Partial sum of squared kernel entries of W*A over m <= m_max."""

    value: float
    convergent: bool | None
    m_max: int


def hs_kernel_norm(weight: DiagonalWeight, a: CoefficientOperator, m_max: int) -> HSKernelReport:
    """Squared Hilbert-Schmidt mass of the kernel of W*A up to block m_max.

    The kernel entry on block m at (n, n') is value(n, m) * a_{n',n}, so the
    squared sum factorizes into sum_{j,k} |a_jk|^2 * value(k, m)^2 summed
    over m <= m_max.  The convergence flag reports whether the infinite sum
    over m exists: for m_power(r) this needs -r > 1/2, for q_power(s, lam)
    it needs s > 1/2; for shell_function weights no criterion is attached.
    """
    if m_max < 0:
        raise DomainError("m_max must be non-negative")
    m = np.arange(m_max + 1, dtype=float)
    total = 0.0
    for (j, k), v in a.entries.items():
        w = np.asarray(weight.value(k, m), dtype=float)
        total += abs(v) ** 2 * float((w * w).sum())
    if weight.kind == "m_power":
        convergent = bool(-weight.r > 0.5)
    elif weight.kind == "q_power":
        convergent = bool(weight.s > 0.5)
    else:
        convergent = None
    return HSKernelReport(value=total, convergent=convergent, m_max=m_max)
