"""Finite abelian p-group arithmetic.

Groups are multisets of cyclic orders p^e, i.e. partitions of the total
exponent.  Subgroup-with-quotient existence is decided by nonvanishing of
the Littlewood-Richardson coefficient c^lambda_{mu nu} (the classical Hall
criterion); testing subgroup and quotient existence separately is not
enough, e.g. Z/p^2 + Z/p + Z/p has both a Z/p^2 subgroup and a Z/p^2
quotient but no subgroup realising both at once.

Exact-sequence fragments are checked by order bookkeeping: at an interior
group the order must equal (incoming image) x (outgoing image).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .fplinalg import check_prime
from .report import FAIL, INCOMPLETE, PASS, Report


def p_valuation(n: int, p: int) -> int:
    if n <= 0:
        raise ValueError("valuation of a non-positive integer")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    if n != 1:
        raise ValueError(f"{n * p ** v} is not a power of {p}")
    return v


@dataclass(frozen=True)
class FinAbPGroup:
    """Finite abelian p-group with optionally named cyclic summands.

    orders keeps the declared listing (aligned with gens); exponents() gives
    the canonical descending partition.
    """

    p: int
    orders: Tuple[int, ...]
    gens: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        check_prime(self.p)
        for o in self.orders:
            if o < 2 or p_valuation(o, self.p) < 1:
                raise ValueError(f"summand order {o} is not a power of {self.p} > 1")
        if self.gens is not None:
            if len(self.gens) != len(self.orders):
                raise ValueError("generator names must align with summand orders")
            if len(set(self.gens)) != len(self.gens):
                raise ValueError("generator names must be unique")

    @classmethod
    def from_exponents(cls, p: int, exponents: Sequence[int]) -> "FinAbPGroup":
        return cls(p, tuple(p ** e for e in sorted(exponents, reverse=True) if e > 0))

    @classmethod
    def trivial(cls, p: int) -> "FinAbPGroup":
        return cls(p, ())

    def exponents(self) -> Tuple[int, ...]:
        return tuple(sorted((p_valuation(o, self.p) for o in self.orders), reverse=True))

    def order(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def is_trivial(self) -> bool:
        return not self.orders

    def max_order(self) -> int:
        return max(self.orders, default=1)

    def same_type(self, other: "FinAbPGroup") -> bool:
        return self.p == other.p and self.exponents() == other.exponents()

    def direct_sum(self, other: "FinAbPGroup") -> "FinAbPGroup":
        if self.p != other.p:
            raise ValueError("prime mismatch")
        return FinAbPGroup.from_exponents(self.p, self.exponents() + other.exponents())

    def generator_order(self, name: str) -> int:
        if self.gens is None or name not in self.gens:
            raise KeyError(f"no generator {name!r} in this group")
        return self.orders[self.gens.index(name)]

    def quotient_by_generator_multiple(self, name: str, scalar: int) -> "FinAbPGroup":
        """Quotient by the cyclic subgroup generated by scalar * (one summand
        generator); the summand Z/p^e becomes Z/p^min(e, v_p(scalar))."""
        if scalar <= 0:
            raise ValueError("scalar must be positive")
        if self.gens is None or name not in self.gens:
            raise KeyError(f"no generator {name!r}")
        idx = self.gens.index(name)
        e = p_valuation(self.orders[idx], self.p)
        s = 0
        sc = scalar
        while sc % self.p == 0:
            sc //= self.p
            s += 1
        new_e = min(e, s)
        orders = list(self.orders)
        gens = list(self.gens)
        if new_e == 0:
            del orders[idx]
            del gens[idx]
        else:
            orders[idx] = self.p ** new_e
        return FinAbPGroup(self.p, tuple(orders), tuple(gens) if self.gens else None)

    def describe(self) -> str:
        if self.is_trivial():
            return "0"
        return " + ".join(f"Z/{o}" for o in self.orders)

    def __repr__(self):
        return f"FinAbPGroup({self.describe()})"


def partitions(n: int, max_part: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of n in decreasing-lex order."""
    if n == 0:
        yield ()
        return
    if max_part is None or max_part > n:
        max_part = n
    for first in range(max_part, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def _conjugate(lam: Tuple[int, ...]) -> Tuple[int, ...]:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


@lru_cache(maxsize=None)
def lr_nonzero(lam: Tuple[int, ...], mu: Tuple[int, ...], nu: Tuple[int, ...]) -> bool:
    """Is the Littlewood-Richardson coefficient c^lambda_{mu nu} nonzero?

    Searches for one semistandard skew tableau of shape lambda/mu and content
    nu whose reverse reading word is a lattice word; sizes here are tiny, so
    plain backtracking over the cells is plenty.
    """
    lam = tuple(sorted(lam, reverse=True))
    mu = tuple(sorted(mu, reverse=True))
    nu = tuple(sorted(nu, reverse=True))
    if sum(lam) != sum(mu) + sum(nu):
        return False
    if len(mu) > len(lam):
        return False
    mu_padded = mu + (0,) * (len(lam) - len(mu))
    if any(m > l for l, m in zip(lam, mu_padded)):
        return False
    if not nu:
        return lam == mu
    # cells in reading order: rows top to bottom, within a row right to left
    cells: List[Tuple[int, int]] = []
    for row, (l, m) in enumerate(zip(lam, mu_padded)):
        for col in range(l - 1, m - 1, -1):
            cells.append((row, col))
    filling: Dict[Tuple[int, int], int] = {}
    counts = [0] * (len(nu) + 1)  # counts[v] = how many v placed, 1-based

    def feasible(cell, v) -> bool:
        row, col = cell
        if counts[v] >= nu[v - 1]:
            return False
        # lattice word: after placing v, #v <= #(v-1)
        if v > 1 and counts[v] + 1 > counts[v - 1]:
            return False
        # row weakly increasing left to right: left neighbour (if filled,
        # which happens later in reading order) is handled when it is placed;
        # right neighbour was placed before us and must be >= v
        right = filling.get((row, col + 1))
        if right is not None and right < v:
            return False
        # column strictly increasing downward: the cell above was placed
        # earlier (previous row) and must be < v
        above = filling.get((row - 1, col))
        if above is not None and above >= v:
            return False
        # cell above might be in mu (empty): no constraint then
        return True

    def place(idx: int) -> bool:
        if idx == len(cells):
            return True
        cell = cells[idx]
        for v in range(1, len(nu) + 1):
            if feasible(cell, v):
                filling[cell] = v
                counts[v] += 1
                if place(idx + 1):
                    return True
                counts[v] -= 1
                del filling[cell]
        return False

    return place(0)


def has_subgroup_with_quotient(
    group: FinAbPGroup, sub: FinAbPGroup, quot: FinAbPGroup
) -> bool:
    """Does group contain a subgroup of type sub with quotient of type quot?"""
    if group.p != sub.p or group.p != quot.p:
        raise ValueError("prime mismatch")
    return lr_nonzero(group.exponents(), sub.exponents(), quot.exponents())


def extension_candidates(
    sub: FinAbPGroup, quot: FinAbPGroup, max_order: int
) -> List[FinAbPGroup]:
    """All abelian p-groups of order |sub| * |quot| with a subgroup of type
    sub and quotient of type quot, in decreasing-lex exponent order."""
    if sub.p != quot.p:
        raise ValueError("prime mismatch")
    total = sub.order() * quot.order()
    if total > max_order:
        raise ValueError(f"|sub|*|quot| = {total} exceeds max_order = {max_order}")
    p = sub.p
    e_total = p_valuation(total, p) if total > 1 else 0
    out = []
    for lam in partitions(e_total):
        if lr_nonzero(lam, sub.exponents(), quot.exponents()):
            out.append(FinAbPGroup.from_exponents(p, lam))
    return out


@dataclass
class ExactFragment:
    """Consecutive slice of a long exact sequence.

    group_names and groups align; groups may be None for the two end
    positions (their orders are never needed).  images[i] is the order of
    the image of the i-th map or None when unresolved.
    """

    name: str
    group_names: List[str]
    groups: List[Optional[FinAbPGroup]]
    map_names: List[str]
    images: List[Optional[int]]

    def __post_init__(self):
        n = len(self.group_names)
        if len(self.groups) != n:
            raise ValueError("groups and group_names must align")
        if len(self.map_names) != n - 1 or len(self.images) != n - 1:
            raise ValueError("need exactly one map between consecutive groups")


def exactness_check(frag: ExactFragment) -> Report:
    """Order bookkeeping at every interior position: |G| = |im in| * |im out|.

    Unresolved image orders (or unknown interior groups) make the position
    incomplete, which is reported distinctly from failure.
    """
    report = Report(f"exactness: {frag.name}")
    for i in range(1, len(frag.group_names) - 1):
        g = frag.groups[i]
        im_in = frag.images[i - 1]
        im_out = frag.images[i]
        name = frag.group_names[i]
        if g is None or im_in is None or im_out is None:
            report.add(
                f"position {name}",
                "exactness as order bookkeeping",
                INCOMPLETE,
                group_order=None if g is None else g.order(),
                image_in=im_in,
                image_out=im_out,
            )
            continue
        ok = g.order() == im_in * im_out
        report.add(
            f"position {name}",
            "exactness as order bookkeeping",
            PASS if ok else FAIL,
            group_order=g.order(),
            image_in=im_in,
            image_out=im_out,
        )
    return report
