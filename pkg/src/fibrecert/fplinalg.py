"""Exact linear algebra over F_p and truncated dimension-series arithmetic.

Everything downstream (tensor algebra spans, group-ring images, cotensor
kernels) reduces to the kernels, ranks and echelon bases computed here.
All arithmetic is exact: integers reduced mod p, no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class Fp:
    """A residue modulo a prime p."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other
        return Fp(int(other), self.p)

    def __add__(self, other):
        o = self._coerce(other)
        return Fp(self.value + o.value, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        return Fp(self.value - o.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return Fp(self.value * o.value, self.p)

    def __neg__(self):
        return Fp(-self.value, self.p)

    def inverse(self) -> "Fp":
        return Fp(inv_mod(self.value, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


class MatrixFp:
    """Dense rectangular matrix over F_p with deterministic echelon reduction.

    Pivoting scans columns left to right and takes the first nonzero row,
    so the reduced form (and every basis derived from it) is reproducible.
    """

    def __init__(self, entries, p: int):
        self.p = check_prime(p)
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        self.a = np.mod(arr, p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "MatrixFp":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def rref(self) -> Tuple[np.ndarray, List[int]]:
        """Reduced row-echelon form; returns (matrix, pivot columns)."""
        a = self.a.copy()
        p = self.p
        nrows, ncols = a.shape
        pivots: List[int] = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            lead = r + int(nz[0])
            if lead != r:
                a[[r, lead]] = a[[lead, r]]
            a[r] = (a[r] * inv_mod(int(a[r, c]), p)) % p
            other = np.nonzero(a[:, c])[0]
            for i in other:
                if i != r:
                    a[i] = (a[i] - a[i, c] * a[r]) % p
            pivots.append(c)
            r += 1
        return a, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def mul_vector(self, v: Sequence[int]) -> np.ndarray:
        vec = np.asarray(v, dtype=np.int64) % self.p
        return (self.a @ vec) % self.p

    def __repr__(self):
        return f"MatrixFp({self.rows}x{self.cols} mod {self.p})"


def kernel_basis(m: MatrixFp) -> List[np.ndarray]:
    """Deterministic basis of the right kernel {v : Mv = 0}.

    One basis vector per free column: the free coordinate is set to 1 and the
    pivot coordinates are read off the reduced echelon form.
    """
    red, pivots = m.rref()
    p = m.p
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = np.zeros(m.cols, dtype=np.int64)
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-int(red[i, free])) % p
        basis.append(v)
    return basis


class SparseEchelon:
    """Incremental echelon basis for sparse F_p vectors.

    Rows are dicts column-key -> nonzero coefficient; keys only need a total
    order (ints, tuples of ints, ...). The pivot of a row is its largest key.
    Insertion order is the only source of choice, so bases are deterministic.
    """

    def __init__(self, p: int):
        self.p = check_prime(p)
        self.rows: Dict[Hashable, Dict[Hashable, int]] = {}

    def reduce(self, row: Mapping[Hashable, int]) -> Dict[Hashable, int]:
        """Remainder of row after reduction against the stored basis."""
        p = self.p
        cur = {k: v % p for k, v in row.items() if v % p}
        while cur:
            piv = max(cur)
            stored = self.rows.get(piv)
            if stored is None:
                return cur
            factor = cur[piv]  # stored rows are normalised to pivot 1
            for k, v in stored.items():
                nv = (cur.get(k, 0) - factor * v) % p
                if nv:
                    cur[k] = nv
                elif k in cur:
                    del cur[k]
        return cur

    def insert(self, row: Mapping[Hashable, int]) -> bool:
        """Add row to the span; returns True if the dimension grew."""
        rem = self.reduce(row)
        if not rem:
            return False
        piv = max(rem)
        inv = inv_mod(rem[piv], self.p)
        self.rows[piv] = {k: (v * inv) % self.p for k, v in rem.items()}
        return True

    def contains(self, row: Mapping[Hashable, int]) -> bool:
        return not self.reduce(row)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis_rows(self) -> List[Dict[Hashable, int]]:
        """Stored rows sorted by pivot key (deterministic)."""
        return [dict(self.rows[k]) for k in sorted(self.rows)]


class GradedVectorSpace:
    """Labelled basis per non-negative degree, over F_p."""

    def __init__(self, p: int, labels: Mapping[int, Sequence[str]]):
        self.p = check_prime(p)
        cleaned: Dict[int, Tuple[str, ...]] = {}
        for d, names in labels.items():
            if d < 0:
                raise ValueError(f"negative degree {d}")
            names = tuple(names)
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate basis labels in degree {d}")
            if names:
                cleaned[d] = names
        self.labels = {d: cleaned[d] for d in sorted(cleaned)}

    def dim(self, degree: int) -> int:
        return len(self.labels.get(degree, ()))

    def dims(self, cutoff: int) -> List[int]:
        return [self.dim(d) for d in range(cutoff + 1)]

    def degrees(self) -> List[int]:
        return [d for d in self.labels]

    def generators(self) -> List[Tuple[str, int]]:
        """Flat (label, degree) list, ordered by degree then position."""
        out = []
        for d, names in self.labels.items():
            out.extend((name, d) for name in names)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GradedVectorSpace)
            and self.p == other.p
            and self.labels == other.labels
        )

    def __repr__(self):
        parts = ", ".join(f"{d}:{len(v)}" for d, v in self.labels.items())
        return f"GradedVectorSpace(p={self.p}, dims {{{parts}}})"


def sphere_space(p: int, dim: int, label: str | None = None) -> GradedVectorSpace:
    """Reduced homology of a single sphere: one class in the given degree."""
    if dim < 1:
        raise ValueError("sphere dimension must be >= 1")
    return GradedVectorSpace(p, {dim: [label or f"s{dim}"]})


class PoincareSeries:
    """Truncated series of non-negative integer coefficients, degree 0..cutoff."""

    __slots__ = ("coefficients", "cutoff")

    def __init__(self, coefficients: Sequence[int]):
        coeffs = tuple(int(c) for c in coefficients)
        if not coeffs:
            raise ValueError("series needs at least the degree-0 coefficient")
        if any(c < 0 for c in coeffs):
            raise ValueError("series coefficients must be non-negative")
        self.coefficients = coeffs
        self.cutoff = len(coeffs) - 1

    def coefficient(self, degree: int) -> int:
        if degree < 0:
            return 0
        if degree > self.cutoff:
            raise IndexError(f"degree {degree} beyond cutoff {self.cutoff}")
        return self.coefficients[degree]

    def __eq__(self, other):
        return (
            isinstance(other, PoincareSeries)
            and self.coefficients == other.coefficients
        )

    def __mul__(self, other):
        return ps_mul(self, other)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coefficients[:12])
        tail = ", ..." if self.cutoff >= 12 else ""
        return f"PoincareSeries([{head}{tail}]; cutoff={self.cutoff})"


def ps_free_tensor(generator_degrees: Iterable[int], cutoff: int) -> PoincareSeries:
    """Dimension series of the free associative algebra on the given degrees.

    t_0 = 1 and t_d = sum_i t_{d - deg_i}: every word is a generator followed
    by a shorter word. Degree-0 generators are rejected (the count diverges).
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    degs = sorted(generator_degrees)
    if any(d <= 0 for d in degs):
        raise ValueError("generator degrees must be positive")
    t = [0] * (cutoff + 1)
    t[0] = 1
    for d in range(1, cutoff + 1):
        t[d] = sum(t[d - g] for g in degs if g <= d)
    return PoincareSeries(t)


def ps_mul(a: PoincareSeries, b: PoincareSeries) -> PoincareSeries:
    """Cauchy product truncated at the common cutoff."""
    if a.cutoff != b.cutoff:
        raise ValueError(f"cutoff mismatch: {a.cutoff} vs {b.cutoff}")
    n = a.cutoff
    out = [0] * (n + 1)
    for d in range(n + 1):
        out[d] = sum(a.coefficients[i] * b.coefficients[d - i] for i in range(d + 1))
    return PoincareSeries(out)
