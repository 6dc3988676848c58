"""Structured ledger of homotopy-group bookkeeping data.

The ledger file is human-writable structured text: blocks of the form

    kind name {
      key: value
      ...
    }

with record kinds ledger (one per file, carries the prime), generator,
group, relation, fact and exact.  Values are integers, "?" for unknown,
quoted strings, bare names, booleans, or [comma, separated, lists]; image
entries in exact records may also be ord(name) or span(a, b).  Unknown
kinds or fields are rejected.

Composition relations are consumed as data (transcribed composition
tables), never derived.  ledger_compose folds them over a path of named
maps left to right.  Soundness rule for scalars: an integer entry in a path
is a degree self-map of the source sphere, and scalar factors commute with
composition only on the source side, so integer entries and relations with
nontrivial scalars are only folded or applied at the tail of a path;
scalar-free naming relations may rewrite anywhere.  Relations carrying a
"mod" list are congruences and are never used for rewriting (the order
derivations use them explicitly, with an independence check).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .abelian import ExactFragment, FinAbPGroup, p_valuation
from .fplinalg import check_prime

ZERO = "zero"

PathEntry = Union[str, int]


class LedgerError(ValueError):
    """Malformed ledger file or unresolved name."""


class ComposeError(ValueError):
    """Non-composable degrees or unsound scalar placement."""


@dataclass(frozen=True)
class GeneratorRec:
    name: str
    degree: Optional[int]
    order: Optional[int]
    source: Optional[str]
    target: Optional[str]
    cite: str = ""

    def source_space(self) -> Optional[str]:
        if self.source is not None:
            return self.source
        if self.degree is not None:
            return f"S{self.degree}"
        return None


@dataclass(frozen=True)
class GroupRec:
    name: str
    orders: Optional[Tuple[int, ...]]
    gens: Optional[Tuple[str, ...]]
    cite: str = ""

    def as_group(self, p: int) -> Optional[FinAbPGroup]:
        if self.orders is None:
            return None
        return FinAbPGroup(p, self.orders, self.gens)


@dataclass(frozen=True)
class RelationRec:
    name: str
    path: Tuple[PathEntry, ...]
    scalar: int
    target: str
    mod: Tuple[str, ...]
    unit_ambiguous: bool
    cite: str = ""

    def lhs_names(self) -> Tuple[str, ...]:
        return tuple(e for e in self.path if isinstance(e, str))

    def lhs_scalar(self) -> int:
        out = 1
        for e in self.path:
            if isinstance(e, int):
                out *= e
        return out


@dataclass(frozen=True)
class FactRec:
    name: str
    kind: str  # "monomorphism" | "bracket"
    map: Optional[str]
    about: Optional[str]
    data: str = ""
    cite: str = ""


@dataclass(frozen=True)
class ExactRec:
    name: str
    groups: Tuple[str, ...]
    maps: Tuple[str, ...]
    images: Tuple[str, ...]  # raw entries: int text, "?", "ord(..)", "span(..)"
    cite: str = ""


@dataclass(frozen=True)
class ComposeResult:
    is_zero: bool
    scalar: int
    chain: Tuple[str, ...]
    unit_ambiguous: bool
    source_degree: Optional[int]
    order: Optional[int]

    @property
    def resolved(self) -> bool:
        return self.is_zero or len(self.chain) == 1


_FIELDS = {
    "ledger": {"prime", "cite"},
    "generator": {"degree", "order", "source", "target", "cite"},
    "group": {"orders", "gens", "cite"},
    "relation": {"path", "scalar", "target", "mod", "unit_ambiguous", "cite"},
    "fact": {"kind", "map", "about", "data", "cite"},
    "exact": {"groups", "maps", "images", "cite"},
}

_NAME_RE = re.compile(r"^[A-Za-z0-9_.()]+$")
_HEADER_RE = re.compile(r"^(\w+)\s+([A-Za-z0-9_.]+)\s*\{$")


_CALL_RE = re.compile(r"^\w+\([A-Za-z0-9_.,\s]*\)$")


def _parse_scalar_value(text: str):
    text = text.strip()
    if text == "?":
        return None
    if text in ("true", "false"):
        return text == "true"
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    if text.startswith('"') and text.endswith('"') and len(text) >= 2:
        return text[1:-1]
    if _CALL_RE.match(text) or _NAME_RE.match(text):
        return text
    raise LedgerError(f"cannot parse value {text!r}")


def _split_list(inner: str) -> List[str]:
    """Split on commas outside parentheses (image entries may be span(a, b))."""
    parts, depth, cur = [], 0, []
    for ch in inner:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur))
    return parts


def _parse_value(text: str):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise LedgerError(f"unterminated list {text!r}")
        inner = text[1:-1].strip()
        if not inner:
            return []
        return [_parse_scalar_value(part) for part in _split_list(inner)]
    return _parse_scalar_value(text)


class Ledger:
    """Parsed ledger with name resolution and composition folding."""

    def __init__(
        self,
        prime: int,
        generators: Sequence[GeneratorRec],
        groups: Sequence[GroupRec],
        relations: Sequence[RelationRec],
        facts: Sequence[FactRec],
        exacts: Sequence[ExactRec],
        cite: str = "",
    ):
        self.prime = check_prime(prime)
        self.cite = cite
        self.generators = {g.name: g for g in generators}
        self.groups = {g.name: g for g in groups}
        self.relations = list(relations)
        self.facts = {f.name: f for f in facts}
        self.exacts = {e.name: e for e in exacts}
        for coll, label in (
            (self.generators, "generator"),
            (self.groups, "group"),
            (self.facts, "fact"),
            (self.exacts, "exact"),
        ):
            if len(coll) != len(list(coll)):
                raise LedgerError(f"duplicate {label} names")
        self._validate()

    # -- parsing ------------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "Ledger":
        records: List[Tuple[str, str, Dict[str, object]]] = []
        kind = name = None
        fields: Dict[str, object] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = _strip_comment(raw)
            if not line:
                continue
            if kind is None:
                m = _HEADER_RE.match(line)
                if not m:
                    raise LedgerError(f"line {lineno}: expected 'kind name {{', got {raw!r}")
                kind, name = m.group(1), m.group(2)
                if kind not in _FIELDS:
                    raise LedgerError(f"line {lineno}: unknown record kind {kind!r}")
                fields = {}
            elif line == "}":
                records.append((kind, name, fields))
                kind = name = None
            else:
                if ":" not in line:
                    raise LedgerError(f"line {lineno}: expected 'key: value', got {raw!r}")
                key, value = line.split(":", 1)
                key = key.strip()
                if key not in _FIELDS[kind]:
                    raise LedgerError(
                        f"line {lineno}: unknown field {key!r} for record kind {kind!r}"
                    )
                if key in fields:
                    raise LedgerError(f"line {lineno}: duplicate field {key!r}")
                fields[key] = _parse_value(value)
        if kind is not None:
            raise LedgerError("unterminated record block")

        prime = None
        cite = ""
        generators, groups, relations, facts, exacts = [], [], [], [], []
        for kind, name, fields in records:
            if kind == "ledger":
                if prime is not None:
                    raise LedgerError("multiple ledger header records")
                prime = fields.get("prime")
                if not isinstance(prime, int):
                    raise LedgerError("ledger record needs an integer prime")
                cite = fields.get("cite", "") or ""
            elif kind == "generator":
                generators.append(
                    GeneratorRec(
                        name,
                        _opt_int(fields.get("degree"), "degree", name),
                        _opt_int(fields.get("order"), "order", name),
                        _opt_name(fields.get("source")),
                        _opt_name(fields.get("target")),
                        fields.get("cite", "") or "",
                    )
                )
            elif kind == "group":
                orders = fields.get("orders")
                if orders is None or isinstance(orders, list):
                    orders_t = tuple(int(o) for o in orders) if orders is not None else None
                else:
                    raise LedgerError(f"group {name}: orders must be a list or ?")
                gens = fields.get("gens")
                gens_t = tuple(str(g) for g in gens) if isinstance(gens, list) else None
                groups.append(GroupRec(name, orders_t, gens_t, fields.get("cite", "") or ""))
            elif kind == "relation":
                path = fields.get("path")
                if not isinstance(path, list) or not path:
                    raise LedgerError(f"relation {name}: path must be a non-empty list")
                entries: List[PathEntry] = []
                for e in path:
                    if isinstance(e, int):
                        entries.append(e)
                    elif isinstance(e, str):
                        entries.append(e)
                    else:
                        raise LedgerError(f"relation {name}: bad path entry {e!r}")
                scalar = fields.get("scalar", 1)
                if not isinstance(scalar, int) or scalar < 0:
                    raise LedgerError(f"relation {name}: scalar must be a non-negative int")
                target = fields.get("target")
                if not isinstance(target, str):
                    raise LedgerError(f"relation {name}: target must be a name or 'zero'")
                mod = fields.get("mod", [])
                if not isinstance(mod, list):
                    raise LedgerError(f"relation {name}: mod must be a list")
                unit = fields.get("unit_ambiguous", False)
                if not isinstance(unit, bool):
                    raise LedgerError(f"relation {name}: unit_ambiguous must be a bool")
                relations.append(
                    RelationRec(
                        name, tuple(entries), scalar, target,
                        tuple(str(m) for m in mod), unit,
                        fields.get("cite", "") or "",
                    )
                )
            elif kind == "fact":
                fkind = fields.get("kind")
                if fkind not in ("monomorphism", "bracket"):
                    raise LedgerError(f"fact {name}: kind must be monomorphism or bracket")
                facts.append(
                    FactRec(
                        name, fkind,
                        _opt_name(fields.get("map")),
                        _opt_name(fields.get("about")),
                        fields.get("data", "") or "",
                        fields.get("cite", "") or "",
                    )
                )
            elif kind == "exact":
                for key in ("groups", "maps", "images"):
                    if not isinstance(fields.get(key), list):
                        raise LedgerError(f"exact {name}: {key} must be a list")
                groups_l = tuple(str(g) for g in fields["groups"])
                maps_l = tuple(str(m) for m in fields["maps"])
                images_l = tuple(
                    str(i) if i is not None else "?" for i in fields["images"]
                )
                if len(maps_l) != len(groups_l) - 1 or len(images_l) != len(maps_l):
                    raise LedgerError(
                        f"exact {name}: need one map and one image per consecutive pair"
                    )
                exacts.append(ExactRec(name, groups_l, maps_l, images_l,
                                       fields.get("cite", "") or ""))
        if prime is None:
            raise LedgerError("missing ledger header record with the prime")
        return cls(prime, generators, groups, relations, facts, exacts, cite)

    @classmethod
    def load(cls, path) -> "Ledger":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.parse(fh.read())

    # -- validation ---------------------------------------------------------

    def _validate(self):
        for g in self.groups.values():
            if g.gens is not None:
                for gen in g.gens:
                    if gen not in self.generators:
                        raise LedgerError(f"group {g.name}: unknown generator {gen!r}")
                if g.orders is not None and len(g.orders) != len(g.gens):
                    raise LedgerError(f"group {g.name}: orders and gens must align")
        for rel in self.relations:
            for e in rel.lhs_names():
                if e not in self.generators:
                    raise LedgerError(f"relation {rel.name}: unknown name {e!r}")
            if rel.target != ZERO and rel.target not in self.generators:
                raise LedgerError(f"relation {rel.name}: unknown target {rel.target!r}")
            for m in rel.mod:
                if m not in self.generators:
                    raise LedgerError(f"relation {rel.name}: unknown mod name {m!r}")
            self._check_scalar_tail(rel.path, f"relation {rel.name}")
            self._check_composable(rel.lhs_names(), f"relation {rel.name}")
        for ex in self.exacts.values():
            for g in ex.groups:
                if g not in self.groups:
                    raise LedgerError(f"exact {ex.name}: unknown group {g!r}")

    @staticmethod
    def _check_scalar_tail(path: Sequence[PathEntry], where: str):
        seen_int = False
        for e in path:
            if isinstance(e, int):
                seen_int = True
            elif seen_int:
                raise ComposeError(
                    f"{where}: scalar entries must sit at the tail of the path "
                    "(scalars only commute with composition on the source side)"
                )

    def _check_composable(self, names: Sequence[str], where: str):
        for left, right in zip(names, names[1:]):
            f = self.generators[left]
            g = self.generators[right]
            source_of_f = f.source_space()
            target_of_g = g.target
            if source_of_f is not None and target_of_g is not None:
                if source_of_f != target_of_g:
                    raise ComposeError(
                        f"{where}: {right} lands in {target_of_g} but {left} "
                        f"starts at {source_of_f}"
                    )

    # -- composition --------------------------------------------------------

    def element_order(self, name: str) -> Optional[int]:
        """Declared order, or the order derived from relations (see
        derived_order); zero has order 1."""
        if name == ZERO:
            return 1
        rec = self.generators.get(name)
        if rec is None:
            raise LedgerError(f"unknown generator {name!r}")
        if rec.order is not None:
            return rec.order
        return self.derived_order(name)

    def _scalar_times_order(self, scalar: int, order: int) -> int:
        """Order of scalar * g for g of the given p-power order."""
        if scalar == 0:
            return 1
        v = 0
        while scalar % self.prime == 0:
            scalar //= self.prime
            v += 1
        e = p_valuation(order, self.prime) if order > 1 else 0
        return self.prime ** max(e - v, 0)

    def compose(
        self, path: Sequence[PathEntry], exclude: frozenset = frozenset()
    ) -> ComposeResult:
        """Fold relations over a composition path, left entry applied last.

        Returns the accumulated scalar, the residual chain (a single name
        when fully resolved), the unit-ambiguity flag ORed over the used
        relations, the source degree of the path, and the element order
        when derivable.
        """
        self._check_scalar_tail(path, "path")
        names: List[str] = []
        scalar = 1
        for e in path:
            if isinstance(e, int):
                scalar *= e
            else:
                if e not in self.generators:
                    raise LedgerError(f"unknown name {e!r} in path")
                names.append(e)
        self._check_composable(names, "path")
        source_degree = None
        if names:
            last = self.generators[names[-1]]
            source_degree = last.degree
        unit = False
        if scalar == 0:
            return ComposeResult(True, 0, (), unit, source_degree, 1)

        changed = True
        rounds = 0
        while changed:
            changed = False
            rounds += 1
            if rounds > 1000:
                raise ComposeError("rewriting did not terminate")
            for rel in self.relations:
                if rel.name in exclude or rel.mod:
                    continue
                lhs = rel.lhs_names()
                if not lhs:
                    continue
                lsc = rel.lhs_scalar()
                if lsc != 1 or rel.scalar != 1:
                    # only sound as a suffix rewrite
                    if (
                        len(names) >= len(lhs)
                        and tuple(names[-len(lhs):]) == lhs
                        and scalar % lsc == 0
                    ):
                        names = names[: len(names) - len(lhs)]
                        scalar = scalar // lsc * rel.scalar
                        unit = unit or rel.unit_ambiguous
                        if rel.target == ZERO or scalar == 0:
                            return ComposeResult(True, 0, (), unit, source_degree, 1)
                        names.append(rel.target)
                        changed = True
                        break
                else:
                    idx = _find_subsequence(names, lhs)
                    if idx is not None:
                        unit = unit or rel.unit_ambiguous
                        if rel.target == ZERO:
                            return ComposeResult(True, 0, (), unit, source_degree, 1)
                        names[idx: idx + len(lhs)] = [rel.target]
                        changed = True
                        break

        order = None
        if len(names) == 1:
            base = self.element_order(names[0])
            if base is not None:
                order = self._scalar_times_order(scalar, base)
        return ComposeResult(False, scalar, tuple(names), unit, source_degree, order)

    def defining_relation(self, name: str) -> Optional[RelationRec]:
        """The unique mod-free relation whose target is the given name."""
        found = [r for r in self.relations if r.target == name and not r.mod]
        if len(found) == 1:
            return found[0]
        return None

    def derived_order(self, name: str) -> Optional[int]:
        """Order of a named element derived from relations.

        Exact when some relation gives p^a * g = (unit) * t with t of known
        order and either no mod list or mod terms of strictly smaller order
        that are independent summand generators alongside t; otherwise the
        combination of an upper bound (p^a * g = 0) and a matching lower
        bound (g maps onto an element of that order) is used.
        """
        rec = self.generators.get(name)
        if rec is None:
            raise LedgerError(f"unknown generator {name!r}")
        upper = None
        lower = 1
        for rel in self.relations:
            lhs = rel.lhs_names()
            lsc = rel.lhs_scalar()
            if lhs == (name,) and lsc > 1 and lsc % self.prime == 0:
                a = p_valuation(lsc, self.prime)
                if rel.target == ZERO:
                    upper = min(upper or lsc, self.prime ** a)
                    continue
                t_order = None
                t_rec = self.generators.get(rel.target)
                if t_rec is not None and t_rec.order is not None:
                    t_order = t_rec.order
                if t_order is None:
                    continue
                if not rel.mod:
                    return self.prime ** a * t_order
                if self._mod_terms_subordinate(rel.target, rel.mod, t_order):
                    return self.prime ** a * t_order
                lower = max(lower, self.prime ** a * t_order)  # conservative
            # lift lower bound: (map o g) = unit * t pins order(g) >= order(t)
            if (
                len(lhs) == 2
                and lhs[1] == name
                and lsc == 1
                and not rel.mod
                and rel.scalar == 1
                and rel.target != ZERO
            ):
                t_rec = self.generators.get(rel.target)
                if t_rec is not None and t_rec.order is not None:
                    lower = max(lower, t_rec.order)
        if upper is not None and upper == lower:
            return upper
        # defining relation: g is literally a composite with derivable order
        rel = self.defining_relation(name)
        if rel is not None:
            res = self.compose(rel.path, exclude=frozenset({rel.name}))
            if res.is_zero:
                return 1
            if res.resolved and res.order is not None:
                return res.order
        return None

    def _mod_terms_subordinate(
        self, target: str, mod: Sequence[str], t_order: int
    ) -> bool:
        """True when target and all mod names are distinct summand generators
        of one declared group and every mod summand has order < t_order (so
        the mod terms cannot cancel the leading summand)."""
        for grp in self.groups.values():
            if grp.gens is None or grp.orders is None:
                continue
            if target not in grp.gens:
                continue
            if any(m not in grp.gens for m in mod):
                continue
            orders = dict(zip(grp.gens, grp.orders))
            if orders[target] != t_order:
                continue
            if all(orders[m] < t_order for m in mod):
                return True
        return False

    # -- exact fragments ----------------------------------------------------

    def fragment(self, name: str) -> ExactFragment:
        rec = self.exacts.get(name)
        if rec is None:
            raise LedgerError(f"unknown exact record {name!r}")
        groups = [self.groups[g].as_group(self.prime) for g in rec.groups]
        images = [self._resolve_image(entry) for entry in rec.images]
        frag = ExactFragment(name, list(rec.groups), groups, list(rec.maps), images)
        self._propagate_images(rec, frag)
        return frag

    def _resolve_image(self, entry: str) -> Optional[int]:
        entry = entry.strip()
        if entry == "?":
            return None
        if re.fullmatch(r"\d+", entry):
            return int(entry)
        m = re.fullmatch(r"ord\(([A-Za-z0-9_.]+)\)", entry)
        if m:
            return self.element_order(m.group(1))
        m = re.fullmatch(r"span\(([A-Za-z0-9_.,\s]+)\)", entry)
        if m:
            parts = [p.strip() for p in m.group(1).split(",")]
            orders = []
            for part in parts:
                rel = self.defining_relation(part)
                if rel is not None:
                    res = self.compose(rel.path, exclude=frozenset({rel.name}))
                    orders.append(1 if res.is_zero else res.order)
                else:
                    orders.append(self.element_order(part))
            if any(o is None for o in orders):
                return None
            nontrivial = [o for o in orders if o > 1]
            if not nontrivial:
                return 1
            if len(nontrivial) == 1:
                return nontrivial[0]
            return None  # joint span order not derivable from orders alone
        raise LedgerError(f"cannot parse image entry {entry!r}")

    def _propagate_images(self, rec: ExactRec, frag: ExactFragment):
        """Monomorphism facts fix image orders; then exactness at positions
        adjacent to a single unknown solves for it."""
        for fact in self.facts.values():
            if fact.kind != "monomorphism" or fact.map is None:
                continue
            if fact.map in frag.map_names:
                i = frag.map_names.index(fact.map)
                domain = frag.groups[i]
                if frag.images[i] is None and domain is not None:
                    frag.images[i] = domain.order()
        changed = True
        while changed:
            changed = False
            for i in range(1, len(frag.group_names) - 1):
                g = frag.groups[i]
                if g is None:
                    continue
                im_in, im_out = frag.images[i - 1], frag.images[i]
                if im_in is not None and im_out is None and im_in > 0:
                    if g.order() % im_in == 0:
                        frag.images[i] = g.order() // im_in
                        changed = True
                elif im_out is not None and im_in is None and im_out > 0:
                    if g.order() % im_out == 0:
                        frag.images[i - 1] = g.order() // im_out
                        changed = True


def _strip_comment(raw: str) -> str:
    out = []
    in_quote = False
    for ch in raw:
        if ch == '"':
            in_quote = not in_quote
        if ch == "#" and not in_quote:
            break
        out.append(ch)
    return "".join(out).strip()


def _find_subsequence(haystack: List[str], needle: Tuple[str, ...]) -> Optional[int]:
    n, m = len(haystack), len(needle)
    for i in range(n - m + 1):
        if tuple(haystack[i: i + m]) == needle:
            return i
    return None


def _opt_int(value, key: str, name: str) -> Optional[int]:
    if value is None:
        return None
    if isinstance(value, int):
        return value
    raise LedgerError(f"{name}: field {key} must be an integer or ?")


def _opt_name(value) -> Optional[str]:
    if value is None:
        return None
    if isinstance(value, str):
        return value
    raise LedgerError(f"expected a name, got {value!r}")


def ledger_compose(ledger: Ledger, path: Sequence[PathEntry]) -> ComposeResult:
    """Module-level convenience wrapper over Ledger.compose."""
    return ledger.compose(path)
