"""Primitively generated tensor Hopf algebra over F_p.

Words in a fixed graded alphabet carry the concatenation product, the
coproduct that makes every generator primitive (with Koszul signs), the
graded commutator bracket and its iterated ad-powers.  Finitely generated
subalgebras are certified free by comparing their computed dimensions
against the free-algebra dimension series.

Elements are homogeneous by construction; mixing degrees is rejected, since
every computation in scope is degree-local.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .fplinalg import SparseEchelon, check_prime, ps_free_tensor

Word = Tuple[int, ...]


class TensorAlgebra:
    """T(V) on an ordered alphabet of graded generators."""

    def __init__(self, p: int, generators: Sequence[Tuple[str, int]]):
        self.p = check_prime(p)
        gens = tuple((str(label), int(deg)) for label, deg in generators)
        labels = [label for label, _ in gens]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique")
        if any(deg < 1 for _, deg in gens):
            raise ValueError("generator degrees must be >= 1")
        self.gens = gens
        self.degrees = tuple(deg for _, deg in gens)
        self.index = {label: i for i, (label, _) in enumerate(gens)}
        self._words: Dict[int, Tuple[Word, ...]] = {0: ((),)}

    def generator(self, label: str) -> "TensorElement":
        i = self.index[label]
        return TensorElement(self, self.degrees[i], {(i,): 1})

    def unit(self) -> "TensorElement":
        return TensorElement(self, 0, {(): 1})

    def zero(self, degree: int = 0) -> "TensorElement":
        return TensorElement(self, degree, {})

    def word_degree(self, word: Word) -> int:
        return sum(self.degrees[i] for i in word)

    def words(self, degree: int) -> Tuple[Word, ...]:
        """All words of the given total degree, in a fixed recursive order."""
        if degree < 0:
            return ()
        cached = self._words.get(degree)
        if cached is None:
            out: List[Word] = []
            for i, d in enumerate(self.degrees):
                if d <= degree:
                    out.extend((i,) + w for w in self.words(degree - d))
            cached = tuple(out)
            self._words[degree] = cached
        return cached

    def element(self, degree: int, coeffs: Dict[Word, int]) -> "TensorElement":
        return TensorElement(self, degree, coeffs)

    def word_label(self, word: Word) -> str:
        if not word:
            return "1"
        return "*".join(self.gens[i][0] for i in word)

    def __eq__(self, other):
        return (
            isinstance(other, TensorAlgebra)
            and self.p == other.p
            and self.gens == other.gens
        )

    def __repr__(self):
        gens = ", ".join(f"{l}:{d}" for l, d in self.gens)
        return f"TensorAlgebra(p={self.p}; {gens})"


class TensorElement:
    """Homogeneous F_p-combination of words of one common degree."""

    __slots__ = ("algebra", "degree", "coeffs")

    def __init__(self, algebra: TensorAlgebra, degree: int, coeffs: Dict[Word, int]):
        p = algebra.p
        cleaned: Dict[Word, int] = {}
        for word, c in coeffs.items():
            c %= p
            if not c:
                continue
            if algebra.word_degree(word) != degree:
                raise ValueError(
                    f"word {word} has degree {algebra.word_degree(word)}, "
                    f"element claims {degree}"
                )
            cleaned[word] = c
        self.algebra = algebra
        self.degree = degree
        self.coeffs = cleaned

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_compatible(self, other: "TensorElement"):
        if self.algebra != other.algebra:
            raise ValueError("alphabet mismatch")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check_compatible(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degrees")
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return TensorElement(self.algebra, self.degree, out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-1) * other

    def __rmul__(self, scalar: int) -> "TensorElement":
        return TensorElement(
            self.algebra,
            self.degree,
            {w: scalar * c for w, c in self.coeffs.items()},
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        return product(self, other)

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other):
        return (
            isinstance(other, TensorElement)
            and self.algebra == other.algebra
            and self.coeffs == other.coeffs
            and (self.is_zero() or self.degree == other.degree)
        )

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for w in sorted(self.coeffs):
            c = self.coeffs[w]
            label = self.algebra.word_label(w)
            parts.append(label if c == 1 else f"{c}*{label}")
        return " + ".join(parts)


def product(a: TensorElement, b: TensorElement) -> TensorElement:
    """Bilinear concatenation product; degrees add."""
    a._check_compatible(b)
    out: Dict[Word, int] = {}
    for wa, ca in a.coeffs.items():
        for wb, cb in b.coeffs.items():
            w = wa + wb
            out[w] = out.get(w, 0) + ca * cb
    return TensorElement(a.algebra, a.degree + b.degree, out)


def _koszul_split_sign(degrees: Sequence[int], left_mask: int) -> int:
    """Sign for splitting a word into (kept-left positions, the rest).

    Each pair i < j with i sent right and j kept left contributes
    (-1)^(deg_i * deg_j): the right-bound letter i has to move past letter j.
    """
    sign = 1
    n = len(degrees)
    for i in range(n):
        if left_mask >> i & 1:
            continue
        if degrees[i] % 2 == 0:
            continue
        for j in range(i + 1, n):
            if left_mask >> j & 1 and degrees[j] % 2:
                sign = -sign
    return sign


def coproduct(a: TensorElement) -> Dict[Tuple[Word, Word], int]:
    """Coproduct with all generators primitive; returns (left, right) -> coeff.

    For a word the expansion runs over position subsets kept on the left,
    with the Koszul sign of the shuffle that pulls the complement out to the
    right.  Extended linearly.
    """
    alg = a.algebra
    p = alg.p
    out: Dict[Tuple[Word, Word], int] = {}
    for word, c in a.coeffs.items():
        n = len(word)
        degs = [alg.degrees[i] for i in word]
        for mask in range(1 << n):
            left = tuple(word[i] for i in range(n) if mask >> i & 1)
            right = tuple(word[i] for i in range(n) if not mask >> i & 1)
            sign = _koszul_split_sign(degs, mask)
            key = (left, right)
            val = (out.get(key, 0) + sign * c) % p
            if val:
                out[key] = val
            elif key in out:
                del out[key]
    return out


def coproduct_terms(
    a: TensorElement,
) -> List[Tuple[TensorElement, TensorElement, int]]:
    """Coproduct as a list of (left word, right word, coefficient) triples."""
    alg = a.algebra
    out = []
    for (left, right), c in sorted(coproduct(a).items()):
        lel = TensorElement(alg, alg.word_degree(left), {left: 1})
        rel = TensorElement(alg, alg.word_degree(right), {right: 1})
        out.append((lel, rel, c))
    return out


def coproduct_mul(
    A: Dict[Tuple[Word, Word], int],
    B: Dict[Tuple[Word, Word], int],
    alg: TensorAlgebra,
) -> Dict[Tuple[Word, Word], int]:
    """Product in T(V) (x) T(V): (a (x) b)(c (x) d) = (-1)^(|b||c|) ac (x) bd."""
    p = alg.p
    out: Dict[Tuple[Word, Word], int] = {}
    for (al, ar), ca in A.items():
        dar = alg.word_degree(ar)
        for (bl, br), cb in B.items():
            sign = -1 if dar % 2 and alg.word_degree(bl) % 2 else 1
            key = (al + bl, ar + br)
            val = (out.get(key, 0) + sign * ca * cb) % p
            if val:
                out[key] = val
            elif key in out:
                del out[key]
    return out


def bracket(a: TensorElement, b: TensorElement) -> TensorElement:
    """Graded commutator [a,b] = ab - (-1)^(|a||b|) ba."""
    a._check_compatible(b)
    sign = -1 if a.degree % 2 and b.degree % 2 else 1
    return product(a, b) - sign * product(b, a)


def ad_power(x: TensorElement, y: TensorElement, m: int) -> TensorElement:
    """Left-normed iterated bracket: m=0 gives x, m=1 gives [x,y], then
    [[...],y] repeatedly."""
    if m < 0:
        raise ValueError("ad exponent must be >= 0")
    out = x
    for _ in range(m):
        out = bracket(out, y)
    return out


def is_primitive(a: TensorElement) -> bool:
    """True iff the coproduct of a is a (x) 1 + 1 (x) a."""
    if a.is_zero():
        return True
    expected: Dict[Tuple[Word, Word], int] = {}
    for w, c in a.coeffs.items():
        expected[(w, ())] = c
        expected[((), w)] = (expected.get(((), w), 0) + c) % a.algebra.p
    expected = {k: v for k, v in expected.items() if v}
    return coproduct(a) == expected


def subalgebra_dims(
    gens: Sequence[TensorElement],
    cutoff: int,
    algebra: Optional[TensorAlgebra] = None,
) -> List[int]:
    """Dimensions per degree of the unital subalgebra generated by gens.

    Degree-by-degree span: every monomial in the generators of positive
    degree is a generator times a shorter monomial, so the degree-d span is
    generated by g * (basis of degree d - |g|).  Rank is tracked with the
    sparse echelon, keyed by words, so the certified dimension is exact.
    """
    if algebra is None:
        if not gens:
            raise ValueError("need an algebra when the generator list is empty")
        algebra = gens[0].algebra
    for g in gens:
        if g.algebra != algebra:
            raise ValueError("alphabet mismatch among generators")
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")

    basis: Dict[int, List[TensorElement]] = {0: [algebra.unit()]}
    dims = [1] + [0] * cutoff
    for d in range(1, cutoff + 1):
        ech = SparseEchelon(algebra.p)
        kept: List[TensorElement] = []
        for g in gens:
            if g.is_zero() or g.degree > d:
                continue
            for b in basis.get(d - g.degree, ()):
                prod = product(g, b)
                if not prod.is_zero() and ech.insert(prod.coeffs):
                    kept.append(prod)
        basis[d] = kept
        dims[d] = len(kept)
    return dims


@dataclass(frozen=True)
class FreeOnDegree:
    degree: int
    ambient_dim: int
    expected_free_dim: int
    equal: bool


@dataclass(frozen=True)
class FreeOnReport:
    generator_degrees: Tuple[int, ...]
    rows: Tuple[FreeOnDegree, ...]

    @property
    def ok(self) -> bool:
        return all(r.equal for r in self.rows)

    def first_failure(self) -> Optional[FreeOnDegree]:
        for r in self.rows:
            if not r.equal:
                return r
        return None


def free_on_check(
    gens: Sequence[TensorElement],
    cutoff: int,
    algebra: Optional[TensorAlgebra] = None,
) -> FreeOnReport:
    """Certify that the subalgebra generated by gens is free on them.

    Compares the computed span dimensions against the free-algebra series on
    the generators' degrees; equality in every degree up to the cutoff is the
    certificate.
    """
    dims = subalgebra_dims(gens, cutoff, algebra=algebra)
    degrees = tuple(g.degree for g in gens)
    expected = ps_free_tensor(degrees, cutoff)
    rows = tuple(
        FreeOnDegree(d, dims[d], expected.coefficient(d), dims[d] == expected.coefficient(d))
        for d in range(cutoff + 1)
    )
    return FreeOnReport(degrees, rows)
