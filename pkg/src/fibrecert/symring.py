"""Koszul-signed symmetric group machinery on tensor powers.

The group ring Z[S_m] (or F_p[S_m]) acts on length-m words of graded letters
by permuting positions, with a sign for every odd-odd pair whose order
flips.  The bracketing element beta_m realises the left-normed m-fold
commutator and satisfies beta_m * beta_m = m * beta_m, so beta_m / m is an
idempotent whenever p does not divide m; its image on a degree component of
V^(x)m is the degree-m Lie piece that drives the cell-attachment
certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .fplinalg import GradedVectorSpace, SparseEchelon, check_prime, inv_mod
from .tensoralg import TensorAlgebra, TensorElement, bracket

MAX_M = 8  # 8! group-ring elements is the largest dense case we allow

Letter = Tuple[object, int]  # (label, degree)


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..m}; images[i-1] is the image of i."""

    images: Tuple[int, ...]

    def __post_init__(self):
        m = len(self.images)
        if sorted(self.images) != list(range(1, m + 1)):
            raise ValueError(f"not a permutation of 1..{m}: {self.images}")

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self*other)(i) = self(other(i))."""
        if self.m != other.m:
            raise ValueError("size mismatch")
        return Permutation(tuple(self(other(i)) for i in range(1, self.m + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.m
        for i in range(1, self.m + 1):
            inv[self(i) - 1] = i
        return Permutation(tuple(inv))

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    def __repr__(self):
        return f"perm{self.images}"


def koszul_action(tau: Permutation, word: Sequence[Letter]) -> Tuple[Tuple, int]:
    """Move the letter at position i to position tau(i); return (word, sign).

    The sign is (-1) for every pair whose relative order flips and whose
    letters both have odd degree.
    """
    m = tau.m
    if len(word) != m:
        raise ValueError(f"word length {len(word)} does not match m={m}")
    placed: List[Optional[Letter]] = [None] * m
    for i, letter in enumerate(word, start=1):
        placed[tau(i) - 1] = letter
    sign = 1
    for i in range(m):
        if word[i][1] % 2 == 0:
            continue
        for j in range(i + 1, m):
            if word[j][1] % 2 and tau(i + 1) > tau(j + 1):
                sign = -sign
    return tuple(placed), sign


class GroupRingElement:
    """Formal combination of permutations of S_m, over Z or over F_p."""

    __slots__ = ("m", "p", "coeffs")

    def __init__(
        self,
        m: int,
        coeffs: Mapping[Permutation, int],
        p: Optional[int] = None,
    ):
        if not 1 <= m <= MAX_M:
            raise ValueError(f"m must be between 1 and {MAX_M}")
        if p is not None:
            check_prime(p)
        cleaned: Dict[Permutation, int] = {}
        for perm, c in coeffs.items():
            if perm.m != m:
                raise ValueError("permutation size mismatch")
            if p is not None:
                c %= p
            if c:
                cleaned[perm] = c
        self.m = m
        self.p = p
        self.coeffs = cleaned

    @classmethod
    def unit(cls, m: int, p: Optional[int] = None) -> "GroupRingElement":
        return cls(m, {Permutation.identity(m): 1}, p)

    def _check(self, other: "GroupRingElement"):
        if self.m != other.m or self.p != other.p:
            raise ValueError("group ring mismatch (m or modulus)")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for perm, c in other.coeffs.items():
            out[perm] = out.get(perm, 0) + c
        return GroupRingElement(self.m, out, self.p)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for perm, c in other.coeffs.items():
            out[perm] = out.get(perm, 0) - c
        return GroupRingElement(self.m, out, self.p)

    def __rmul__(self, scalar: int):
        return GroupRingElement(
            self.m, {perm: scalar * c for perm, c in self.coeffs.items()}, self.p
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        return ring_mul(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.m == other.m
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def reduce_mod(self, p: int) -> "GroupRingElement":
        return GroupRingElement(self.m, self.coeffs, check_prime(p))

    def act_on_word(self, word: Sequence[Letter]) -> Dict[Tuple, int]:
        """Koszul-signed action on a word of (label, degree) letters."""
        out: Dict[Tuple, int] = {}
        for perm, c in self.coeffs.items():
            new_word, sign = koszul_action(perm, word)
            val = out.get(new_word, 0) + sign * c
            if self.p is not None:
                val %= self.p
            if val:
                out[new_word] = val
            elif new_word in out:
                del out[new_word]
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [f"{c}*{perm}" for perm, c in sorted(self.coeffs.items(), key=lambda t: t[0].images)]
        mod = f" (mod {self.p})" if self.p is not None else ""
        return " + ".join(parts) + mod


def ring_mul(e1: GroupRingElement, e2: GroupRingElement) -> GroupRingElement:
    """Convolution product; composition matches the left action on words."""
    e1._check(e2)
    out: Dict[Permutation, int] = {}
    for s, cs in e1.coeffs.items():
        for t, ct in e2.coeffs.items():
            st = s.compose(t)
            out[st] = out.get(st, 0) + cs * ct
    return GroupRingElement(e1.m, out, e1.p)


def dynkin_element(m: int) -> GroupRingElement:
    """Integer group-ring element acting as [[..[x1,x2],..],xm] on words of
    all-even-degree letters, obtained by expanding the bracket symbolically."""
    if not 2 <= m <= MAX_M:
        raise ValueError(f"m must be between 2 and {MAX_M}")
    # expand over formal letters 1..m; even degrees make every sign classical
    terms: Dict[Tuple[int, ...], int] = {(1,): 1}
    for k in range(2, m + 1):
        new: Dict[Tuple[int, ...], int] = {}
        for w, c in terms.items():
            right = w + (k,)
            new[right] = new.get(right, 0) + c
            left = (k,) + w
            new[left] = new.get(left, 0) - c
        terms = new
    coeffs: Dict[Permutation, int] = {}
    for w, c in terms.items():
        # the word places letter w[j] at position j+1, so tau(w[j]) = j+1
        images = [0] * m
        for pos, letter in enumerate(w, start=1):
            images[letter - 1] = pos
        coeffs[Permutation(tuple(images))] = c
    return GroupRingElement(m, coeffs)


def bracket_idempotent(m: int, p: int) -> GroupRingElement:
    """dynkin_element(m)/m over F_p; requires p not dividing m."""
    check_prime(p)
    if m % p == 0:
        raise ValueError(f"p={p} divides m={m}: the scalar 1/m does not exist")
    return inv_mod(m, p) * dynkin_element(m).reduce_mod(p)


def _power_words(V: GradedVectorSpace, m: int, degree: int) -> List[Tuple[Letter, ...]]:
    """Length-m words of V-generators with the given total degree."""
    letters = [(label, d) for label, d in V.generators()]
    out = []
    for combo in iproduct(letters, repeat=m):
        if sum(deg for _, deg in combo) == degree:
            out.append(combo)
    return out


def _tensor_algebra(V: GradedVectorSpace) -> TensorAlgebra:
    return TensorAlgebra(V.p, [(str(label), d) for label, d in V.generators()])


def _to_element(alg: TensorAlgebra, degree: int, row: Mapping[Tuple, int]) -> TensorElement:
    coeffs = {tuple(alg.index[str(l)] for l, _ in word): c for word, c in row.items()}
    return TensorElement(alg, degree, coeffs)


def idempotent_stable_image(
    e: GroupRingElement,
    V: GradedVectorSpace,
    m: int,
    degree: int,
) -> List[TensorElement]:
    """Deterministic basis of the image of an idempotent e on (V^(x)m)_degree.

    e must be idempotent over F_p; then the stable image of iterating e is
    the image of e itself, which is what gets returned (echelonised, pivots
    sorted).
    """
    if e.p is None:
        raise ValueError("idempotent must live over F_p, not Z")
    if e.m != m:
        raise ValueError("group-ring element size does not match m")
    if ring_mul(e, e) != e:
        raise ValueError("element is not idempotent over F_p")
    alg = _tensor_algebra(V)
    ech = SparseEchelon(V.p)
    for word in _power_words(V, m, degree):
        image = e.act_on_word(word)
        if image:
            ech.insert({tuple(alg.index[str(l)] for l, _ in w): c for w, c in image.items()})
    return [TensorElement(alg, degree, row) for row in ech.basis_rows()]


def lie_component(V: GradedVectorSpace, m: int, degree: int) -> List[TensorElement]:
    """Basis of the span of all left-normed m-fold brackets of V-generators
    whose degrees sum to the given degree."""
    if m < 2:
        raise ValueError("m must be >= 2")
    alg = _tensor_algebra(V)
    gens = [alg.generator(str(label)) for label, _ in V.generators()]
    ech = SparseEchelon(V.p)
    for combo in iproduct(range(len(gens)), repeat=m):
        if sum(gens[i].degree for i in combo) != degree:
            continue
        el = gens[combo[0]]
        for i in combo[1:]:
            el = bracket(el, gens[i])
        if not el.is_zero():
            ech.insert(el.coeffs)
    return [TensorElement(alg, degree, row) for row in ech.basis_rows()]


def span_equal(a: Iterable[TensorElement], b: Iterable[TensorElement], p: int) -> bool:
    """Row-space equality of two families of same-degree elements."""
    ech_a = SparseEchelon(p)
    for el in a:
        ech_a.insert(el.coeffs)
    ech_b = SparseEchelon(p)
    for el in b:
        ech_b.insert(el.coeffs)
    if ech_a.dim != ech_b.dim:
        return False
    return all(ech_a.contains(row) for row in ech_b.basis_rows())
