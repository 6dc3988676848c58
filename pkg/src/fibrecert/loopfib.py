"""Loop-space homology engines.

For a two-cell complex with cells in dimensions m < r, the loop homology of
the homotopy fibre of the pinch map onto the top sphere is computed as a
cotensor invariant subspace: inside T(u, v) (|u| = m-1, |v| = r-1) the
coaction rho = (id (x) pi) o Delta, with pi the algebra map killing u and
sending v to the loop class of the bottom sphere of the target, cuts out
exactly the elements with trivial coaction.  Degree by degree this is a
kernel computation over F_p.

The expected answer is the free algebra on the ad-ladder {ad^i(v)(u)}, and
the generator ladders for the skeleta of the jth-stage fibres are tabulated
here as degree data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fplinalg import (
    MatrixFp,
    PoincareSeries,
    check_prime,
    kernel_basis,
    ps_free_tensor,
    ps_mul,
)
from .tensoralg import TensorAlgebra, TensorElement, Word, ad_power, product

MEMORY_BUDGET_ENTRIES = 50_000_000


class MemoryBudgetError(RuntimeError):
    """The requested cutoff would need more matrix entries than allowed."""


@dataclass(frozen=True)
class LoopFibreProblem:
    """Pinch-map fibre problem for a two-cell complex S^m cup e^r."""

    m: int
    r: int
    p: int
    cutoff: int

    def __post_init__(self):
        if not 2 <= self.m < self.r:
            raise ValueError(f"need 2 <= m < r, got m={self.m}, r={self.r}")
        check_prime(self.p)
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")

    def algebra(self) -> TensorAlgebra:
        return TensorAlgebra(self.p, [("u", self.m - 1), ("v", self.r - 1)])

    def ladder_degrees(self) -> List[int]:
        """Degrees of the expected free generators ad^i(v)(u), truncated."""
        u, v = self.m - 1, self.r - 1
        return [u + i * v for i in range(self.cutoff + 1) if u + i * v <= self.cutoff]


def coaction_defect(el: TensorElement, v_index: int = 1) -> Dict[Tuple[Word, int], int]:
    """Coordinates of rho(a) - a (x) 1 on the components T(u,v) (x) iota^j, j >= 1.

    Only coproduct terms whose right factor is a pure power of v survive pi,
    so the expansion runs over subsets of the v-positions of each word.
    """
    alg = el.algebra
    p = alg.p
    out: Dict[Tuple[Word, int], int] = {}
    for word, c in el.coeffs.items():
        v_positions = [i for i, g in enumerate(word) if g == v_index]
        degs = [alg.degrees[g] for g in word]
        n = len(word)
        for mask in range(1, 1 << len(v_positions)):
            right = [v_positions[t] for t in range(len(v_positions)) if mask >> t & 1]
            right_set = set(right)
            left = tuple(word[i] for i in range(n) if i not in right_set)
            # Koszul sign: each right-bound letter i moves past the kept
            # letters j > i
            sign = 1
            for i in right:
                if degs[i] % 2 == 0:
                    continue
                for j in range(i + 1, n):
                    if j not in right_set and degs[j] % 2:
                        sign = -sign
            key = (left, len(right))
            val = (out.get(key, 0) + sign * c) % p
            if val:
                out[key] = val
            elif key in out:
                del out[key]
    return out


def in_cotensor(el: TensorElement) -> bool:
    """True iff the coaction of el is trivial: rho(el) = el (x) 1."""
    return not coaction_defect(el)


def _budget_check(prob: LoopFibreProblem, alg: TensorAlgebra):
    v_deg = prob.r - 1
    total = 0
    for d in range(prob.cutoff + 1):
        n_words = len(alg.words(d))
        n_constraints = 0
        j = 1
        while d - j * v_deg >= 0:
            n_constraints += len(alg.words(d - j * v_deg))
            j += 1
        total += n_words * n_constraints
        if total > MEMORY_BUDGET_ENTRIES:
            raise MemoryBudgetError(
                f"cutoff {prob.cutoff} needs more than {MEMORY_BUDGET_ENTRIES} "
                f"matrix entries; lower the cutoff"
            )


def cotensor_basis(prob: LoopFibreProblem) -> Dict[int, List[TensorElement]]:
    """Per-degree deterministic basis of the cotensor invariant subspace."""
    alg = prob.algebra()
    _budget_check(prob, alg)
    v_deg = prob.r - 1
    out: Dict[int, List[TensorElement]] = {}
    for d in range(prob.cutoff + 1):
        words = alg.words(d)
        if not words:
            out[d] = []
            continue
        # constraint rows: one per (left word, j >= 1) coordinate
        coords: Dict[Tuple[Word, int], int] = {}
        j = 1
        while d - j * v_deg >= 0:
            for w in alg.words(d - j * v_deg):
                coords[(w, j)] = len(coords)
            j += 1
        mat = np.zeros((max(len(coords), 1), len(words)), dtype=np.int64)
        for col, w in enumerate(words):
            el = TensorElement(alg, d, {w: 1})
            for key, c in coaction_defect(el).items():
                mat[coords[key], col] = c
        vecs = kernel_basis(MatrixFp(mat, prob.p))
        out[d] = [
            TensorElement(alg, d, {words[i]: int(v[i]) for i in range(len(words)) if v[i]})
            for v in vecs
        ]
    return out


def cotensor_fiber_homology(prob: LoopFibreProblem) -> List[int]:
    """Dimensions per degree of the cotensor fibre homology."""
    basis = cotensor_basis(prob)
    return [len(basis[d]) for d in range(prob.cutoff + 1)]


@dataclass(frozen=True)
class CotensorReport:
    problem: LoopFibreProblem
    dims: Tuple[int, ...]
    expected_dims: Tuple[int, ...]
    dims_match: bool
    ad_membership: Tuple[bool, ...]
    closure_checked_degree: Optional[int]
    closure_ok: Optional[bool]

    @property
    def ok(self) -> bool:
        closure = True if self.closure_ok is None else self.closure_ok
        return self.dims_match and all(self.ad_membership) and closure


def cotensor_report(
    prob: LoopFibreProblem,
    ad_count: int = 4,
    closure_degree: Optional[int] = None,
) -> CotensorReport:
    """Full certificate for one problem: dimension table against the
    ad-ladder free algebra, membership of the ad-powers, and (optionally)
    closure of the invariant subspace under the product."""
    basis = cotensor_basis(prob)
    dims = tuple(len(basis[d]) for d in range(prob.cutoff + 1))
    expected = tuple(
        ps_free_tensor(prob.ladder_degrees(), prob.cutoff).coefficients
    )
    alg = prob.algebra()
    u, v = alg.generator("u"), alg.generator("v")
    membership = []
    for i in range(ad_count):
        el = ad_power(u, v, i)
        membership.append(el.degree > prob.cutoff or in_cotensor(el))
    closure_ok = None
    if closure_degree is not None:
        closure_ok = True
        degrees = [d for d in range(1, closure_degree + 1)]
        for d1 in degrees:
            for d2 in degrees:
                if d1 + d2 > closure_degree:
                    continue
                for a in basis[d1]:
                    for b in basis[d2]:
                        if not in_cotensor(product(a, b)):
                            closure_ok = False
    return CotensorReport(
        prob, dims, expected, dims == expected, tuple(membership),
        closure_degree, closure_ok,
    )


@dataclass(frozen=True)
class GeneratorLadder:
    """T-algebra generator degrees for the loop homology of a fibre stage."""

    stage: str
    entries: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        degs = [d for _, d in self.entries]
        if any(b <= a for a, b in zip(degs, degs[1:])):
            raise ValueError("ladder degrees must be strictly increasing")

    def degrees(self) -> List[int]:
        return [d for _, d in self.entries]


STAGES = ("F", "F2", "F3", "G")


def fiber_generator_ladder(
    n: int, k: int, stage: str, cutoff: int = 40
) -> GeneratorLadder:
    """Loop-homology generator ladder for the fibre tower stages.

    F:  ad^m(y)(x) in degrees n + m(n+k+1)   (full fibre)
    F2: x, [x,y]                             (2-cell skeleton)
    F3: x, [x,y], [[x,y],y]                  (3-cell skeleton)
    G:  ad^m(z)(x) in degrees n + m(2n+k+1)  (fibre over the 2-cell skeleton)
    """
    if n < 2 or k < 0:
        raise ValueError("need n >= 2 and k >= 0")
    b = n + k + 1
    z = 2 * n + k + 1
    if stage == "F":
        entries = [
            (f"ad^{m}(y)(x)" if m else "x", n + m * b)
            for m in range(cutoff + 1)
            if n + m * b <= cutoff
        ]
    elif stage == "F2":
        entries = [("x", n), ("[x,y]", z)]
    elif stage == "F3":
        entries = [("x", n), ("[x,y]", z), ("[[x,y],y]", n + 2 * b)]
    elif stage == "G":
        entries = [
            (f"ad^{m}(z)(x)" if m else "x", n + m * z)
            for m in range(cutoff + 1)
            if n + m * z <= cutoff
        ]
    else:
        raise ValueError(f"unknown stage {stage!r}; expected one of {STAGES}")
    return GeneratorLadder(stage, tuple(entries))


def ladder_series_identity(
    base_degrees: Sequence[int],
    ladder_degrees: Sequence[int],
    cofactor_degree: int,
    cutoff: int,
) -> bool:
    """Does free(base) = free(ladder) x free({cofactor}) up to the cutoff?"""
    lhs = ps_free_tensor(base_degrees, cutoff)
    rhs = ps_mul(
        ps_free_tensor(ladder_degrees, cutoff),
        ps_free_tensor([cofactor_degree], cutoff),
    )
    return lhs == rhs


@dataclass(frozen=True)
class SerreFactorizationReport:
    n: int
    k: int
    cutoff: int
    f_tower_ok: bool
    g_tower_ok: bool

    @property
    def ok(self) -> bool:
        return self.f_tower_ok and self.g_tower_ok


def serre_factorization_check(
    n: int, k: int, p: int, cutoff: int = 40
) -> SerreFactorizationReport:
    """Dimension-series factorization for the fibre of each pinch map.

    The loop homology of the two-cell base is free on {n, b}; looping the
    fibration against the top sphere splits off a free factor on {b}, with
    the fibre ladder accounting for the rest.  Same check for the G-tower
    with b replaced by the bracket degree.
    """
    check_prime(p)
    f_ok = ladder_series_identity(
        [n, n + k + 1],
        fiber_generator_ladder(n, k, "F", cutoff).degrees(),
        n + k + 1,
        cutoff,
    )
    g_ok = ladder_series_identity(
        [n, 2 * n + k + 1],
        fiber_generator_ladder(n, k, "G", cutoff).degrees(),
        2 * n + k + 1,
        cutoff,
    )
    return SerreFactorizationReport(n, k, cutoff, f_ok, g_ok)


@dataclass(frozen=True)
class TransgressionRow:
    fibre_degree: int
    loop_degree: int
    fibre_label: str
    loop_label: str


def transgression_table(n: int, k: int, count: int) -> List[TransgressionRow]:
    """Fibre classes a*b^m against the loop classes ad^m(y)(x).

    The homology suspension shifts degree by one: each fibre class in degree
    n+1+m(n+k+1) suspends from the loop class in degree n+m(n+k+1).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    b = n + k + 1
    rows = []
    for m in range(count):
        fibre_deg = n + 1 + m * b
        loop_deg = n + m * b
        if fibre_deg != loop_deg + 1:
            raise AssertionError("suspension shift must be exactly one")
        fibre_label = "a" if m == 0 else f"a*b^{m}"
        loop_label = "x" if m == 0 else f"ad^{m}(y)(x)"
        rows.append(TransgressionRow(fibre_deg, loop_deg, fibre_label, loop_label))
    return rows
