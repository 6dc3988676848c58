"""Cell-structure bookkeeping for the relative James fibre tower.

The homotopy fibre of the pinch map off a two-cell suspension has the
homology of S^(n+1) smashed against a free monoid on S^(n+k+1); its skeleta
F2 and F3, the fibre G over the 2-cell skeleton, Whitehead-product
decompositions, and the factorization certificate for the 3-cell attaching
map are all recorded here as exact degree data.  Attaching maps stay
symbolic: the artifact certifies shapes and dimensions, never homotopy
classes, and equalities that only hold up to a unit of the p-local integers
carry an explicit ambiguity flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .fplinalg import GradedVectorSpace, check_prime, sphere_space
from .report import FAIL, PASS, RECORDED, Report
from .symring import bracket_idempotent, idempotent_stable_image, lie_component
from . import loopfib


class HypothesisError(ValueError):
    """Input outside the certified hypotheses (not a computation failure)."""


@dataclass(frozen=True)
class Cell:
    dim: int
    label: str
    attach: Optional[str] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("cell dimensions must be >= 1 (base point implicit)")


@dataclass(frozen=True)
class CellComplex:
    name: str
    cells: Tuple[Cell, ...]

    def __post_init__(self):
        dims = [c.dim for c in self.cells]
        if dims != sorted(dims):
            raise ValueError("cells must be listed in increasing dimension")

    def dims(self) -> List[int]:
        return [c.dim for c in self.cells]

    def top_dim(self) -> int:
        return self.cells[-1].dim


@dataclass(frozen=True)
class MapFactor:
    name: str
    source: str
    target: str
    source_dim: Optional[int] = None
    target_dim: Optional[int] = None


@dataclass(frozen=True)
class MapRecord:
    """A named map with a decomposition into composable factors.

    Factors are listed source-first: factors[0] is applied first.  The
    chain is dimension-checked on construction; a mismatch means an
    arithmetic bug upstream, not a mathematical statement.
    """

    name: str
    factors: Tuple[MapFactor, ...]
    sign_ambiguous: bool = False
    unit_ambiguous: bool = False

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if a.target != b.source or (
                a.target_dim is not None
                and b.source_dim is not None
                and a.target_dim != b.source_dim
            ):
                raise ValueError(
                    f"non-composable factors in {self.name}: "
                    f"{a.name} lands in {a.target} (dim {a.target_dim}), "
                    f"{b.name} starts at {b.source} (dim {b.source_dim})"
                )

    def chain(self) -> List[str]:
        out = [self.factors[0].source]
        out.extend(f.target for f in self.factors)
        return out


def relative_james_homology(
    hX: GradedVectorSpace, hA: GradedVectorSpace, cutoff: int
) -> GradedVectorSpace:
    """Graded dimensions of hX (x) T(hA) with word labels, up to the cutoff.

    This is the field-coefficient homology of the relative free-monoid
    construction on (X, A); both inputs must be reduced (nothing in degree
    zero).
    """
    if hX.p != hA.p:
        raise ValueError("modulus mismatch")
    if hX.dim(0) or hA.dim(0):
        raise ValueError("inputs must be reduced: degree 0 must be empty")
    a_gens = hA.generators()
    # words in the T(hA) tensor factor, by total degree
    words: Dict[int, List[str]] = {0: [""]}

    def words_of(d: int) -> List[str]:
        if d not in words:
            out = []
            for label, deg in a_gens:
                if deg <= d:
                    out.extend(
                        f"{label}|{rest}" if rest else label
                        for rest in words_of(d - deg)
                    )
            words[d] = out
        return words[d]

    labels: Dict[int, List[str]] = {}
    for x_label, x_deg in hX.generators():
        for d in range(x_deg, cutoff + 1):
            for w in words_of(d - x_deg):
                labels.setdefault(d, []).append(f"{x_label}*{w}" if w else x_label)
    return GradedVectorSpace(hX.p, labels)


def skeleton_index(m: int, r: int, t: int) -> int:
    """Largest j with sk_j equal to the t-th filtration stage J_t.

    Convention: J_0 = *, J_1 = X (bottom cell dimension r), and J_t has top
    cell r + (t-1)m, so the next cell appears in dimension r + tm.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    return r + t * m - 1


def raw_filtration_index(m: int, r: int, t: int) -> int:
    """The classical filtration index formula m(t-1) + r - 1, reported
    verbatim for comparison; it indexes the same tower shifted by one
    stage relative to skeleton_index."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return m * (t - 1) + r - 1


def fiber_tower(n: int, k: int, cell_count: int = 4) -> Dict[str, CellComplex]:
    """Cell complexes F, F2, F3 and G of the fibre tower over a two-cell
    suspension with cells n+1 and n+k+2.

    F  has cells n+1+i(n+k+1); F2 = S^(n+1) cup e^(2n+k+2) attached by the
    Whitehead product of the bottom identity and the suspended attaching
    map; F3 adds e^(3n+2k+3); G has cells n+1+i(2n+k+1) and splits as a
    wedge at the bottom because its 3-fold Whitehead attachment vanishes.
    """
    if n < 2 or k < 0:
        raise ValueError("need n >= 2 and k >= 0")
    if cell_count < 3:
        raise ValueError("cell_count must be >= 3")
    b = n + k + 1
    f_cells = tuple(
        Cell(n + 1 + i * b, f"e{n + 1 + i * b}", None if i == 0 else "ladder")
        for i in range(cell_count)
    )
    f2 = CellComplex(
        "F2",
        (
            Cell(n + 1, f"s{n + 1}"),
            Cell(2 * n + k + 2, f"e{2 * n + k + 2}", "alpha=[1,Sf]"),
        ),
    )
    f3 = CellComplex(
        "F3",
        f2.cells + (Cell(3 * n + 2 * k + 3, f"e{3 * n + 2 * k + 3}", "beta"),),
    )
    z = 2 * n + k + 1
    g_cells = tuple(
        Cell(
            n + 1 + i * z,
            f"e{n + 1 + i * z}",
            None if i == 0 else ("wedge" if i == 1 else "ladder"),
        )
        for i in range(cell_count)
    )
    return {
        "F": CellComplex("F", f_cells),
        "F2": f2,
        "F3": f3,
        "G": CellComplex("G", g_cells),
    }


def whitehead_decomposition(m: int, i: int, j: int) -> MapRecord:
    """Whitehead product of classes in pi_i(S^m) and pi_j(S^m), decomposed as
    (Whitehead square of the identity) o (suspended second) o (suspended
    first), with every intermediate sphere dimension recorded.

    The sign of the decomposition is not determined, so the record carries a
    sign-ambiguity marker.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    if i < m or j < m:
        raise ValueError("classes must live on or above the sphere dimension")
    factors = (
        MapFactor(f"susp^{j - 1}(first)", f"S{i + j - 1}", f"S{m + j - 1}",
                  i + j - 1, m + j - 1),
        MapFactor(f"susp^{m - 1}(second)", f"S{m + j - 1}", f"S{2 * m - 1}",
                  m + j - 1, 2 * m - 1),
        MapFactor("whitehead-square", f"S{2 * m - 1}", f"S{m}", 2 * m - 1, m),
    )
    return MapRecord(f"[pi_{i},pi_{j}] on S^{m}", factors, sign_ambiguous=True)


def check_certificate_hypotheses(n: int, k: int, p: int):
    if n < 2 or k < 0:
        raise HypothesisError("need n >= 2 and k >= 0")
    check_prime(p)
    if p == 3:
        raise HypothesisError(
            "p = 3 is excluded: the cubic bracketing idempotent needs 1/3"
        )
    if p >= 5 and (n + k) % 2 == 0:
        raise HypothesisError(
            f"for p >= 5 the certificate requires n+k odd; got n+k = {n + k}"
        )


def main_theorem_certificate(n: int, k: int, p: int) -> Report:
    """Factorization certificate for the attaching map of the 3-cell
    skeleton of the fibre: it factors through the bottom wedge summand of G
    as a (2n+k+2)-fold suspension of the original attaching map, up to an
    invertible p-local coefficient.

    Every dimension in the chain is recomputed from the tower and
    cross-checked; the cubic Lie piece is recomputed from the group-ring
    idempotent and matched against the suspended two-cell degrees.
    """
    check_certificate_hypotheses(n, k, p)
    b = n + k + 1
    tower = fiber_tower(n, k)
    report = Report(f"attaching-map factorization certificate (n={n}, k={k}, p={p})")

    source_dim = 3 * n + 2 * k + 2
    mid_dim = 3 * n + k + 2
    factors = (
        MapFactor(f"susp^{2 * n + k + 2}(f)", f"S{source_dim}", f"S{mid_dim}",
                  source_dim, mid_dim),
        MapFactor("j4", f"S{mid_dim}", "G", mid_dim, None),
        MapFactor("j3", "G", "F2"),
    )
    record = MapRecord("beta-factorization", factors, unit_ambiguous=True)
    f3_top = tower["F3"].top_dim()
    g_dims = tower["G"].dims()
    chain_ok = (
        source_dim == f3_top - 1
        and mid_dim == g_dims[1]
        and tower["F2"].dims() == [n + 1, 2 * n + k + 2]
    )
    report.add(
        "factorization-chain",
        "attaching map of the 3-cell skeleton factors through the fibre "
        "over the 2-cell skeleton",
        PASS if chain_ok else FAIL,
        chain=record.chain(),
        source_dim=source_dim,
        f3_top_cell=f3_top,
        g_bottom_cells=g_dims[:2],
        f2_cells=tower["F2"].dims(),
        unit_ambiguous=record.unit_ambiguous,
    )

    # suspension-shift datum: the cubic functor piece of the two-cell complex
    # is the (2n+k+2)-fold suspension of the complex itself
    cf_cells = [n, n + k + 1]
    suspended = [c + 2 * n + k + 2 for c in cf_cells]
    expected_cells = [3 * n + k + 2, 3 * n + 2 * k + 3]
    report.add(
        "cubic-piece-suspension",
        "the cubic smash summand of the two-cell complex is a suspension "
        "of the complex",
        PASS if suspended == expected_cells else FAIL,
        suspended_cells=suspended,
        expected_cells=expected_cells,
    )

    # cubic Lie piece via the group-ring idempotent, matched to the
    # once-lower suspension degrees
    V = GradedVectorSpace(p, {n: ["x"], n + k + 1: ["y"]})
    e3 = bracket_idempotent(3, p)
    lie_degrees = {}
    lo, hi = 3 * n, 3 * (n + k + 1)
    for d in range(lo, hi + 1):
        dim = len(idempotent_stable_image(e3, V, 3, d))
        if dim:
            lie_degrees[d] = dim
    expected_lie = {3 * n + k + 1: 1, 3 * n + 2 * k + 2: 1}
    lie_ok = lie_degrees == expected_lie
    # cross-check against the plain bracket span
    for d in expected_lie:
        if len(lie_component(V, 3, d)) != 1:
            lie_ok = False
    report.add(
        "cubic-lie-span",
        "the degree-3 Lie piece is spanned by [[x,y],y] and [[x,y],x], "
        "matching the suspended two-cell degrees",
        PASS if lie_ok else FAIL,
        computed={str(d): v for d, v in lie_degrees.items()},
        expected={str(d): v for d, v in expected_lie.items()},
        suspended_cf_cells=[c + 2 * n + k + 1 for c in cf_cells],
    )

    report.add(
        "bottom-wedge-monomorphism-range",
        "the composite inclusion of the bottom wedge sphere of G is a "
        "monomorphism on homotopy in the stated range (consumed as input)",
        RECORDED,
        range_upper=4 * n + 2 * k + 1,
        sphere=mid_dim,
    )
    return report
