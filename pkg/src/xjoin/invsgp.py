"""Finite inverse semigroups with zero: validation, idempotents, natural order,
conjugation, invariant relation closure and the action on characters."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .semilattice import (
    Character,
    FinMeetSemilattice,
    LawViolation,
    XRelation,
    builtin_relations,
    spectrum,
)


@dataclass(frozen=True)
class FinInverseSemigroup:
    """Multiplication table over indices 0..n-1; index 0 is the zero element."""

    mult: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.mult)

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def d(self, a: int) -> int:
        return self.mult[self.inv[a]][a]

    def r(self, a: int) -> int:
        return self.mult[a][self.inv[a]]

    def is_idempotent(self, a: int) -> bool:
        return self.mult[a][a] == a

    def label(self, a: int) -> str:
        return self.labels[a]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LawViolation(f"unknown element label {label!r}") from None


def validate(table, labels=None) -> FinInverseSemigroup:
    """Check the inverse-semigroup laws and build the structure.

    Reports the first violated law with witnesses: associativity, existence
    and uniqueness of generalized inverses, commuting idempotents, and the
    absorbing zero at index 0.
    """
    rows = tuple(tuple(int(v) for v in row) for row in table)
    n = len(rows)
    if n == 0:
        raise LawViolation("semigroup needs at least the zero element")
    if labels is None:
        labels = tuple("0" if i == 0 else f"s{i}" for i in range(n))
    labels = tuple(str(x) for x in labels)
    if len(labels) != n or len(set(labels)) != n:
        raise LawViolation("need one distinct label per element")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise LawViolation(f"row {labels[i]} has length {len(row)}, want {n}")
        for v in row:
            if not 0 <= v < n:
                raise LawViolation(f"entry {v} out of range in row {labels[i]}")
    for a in range(n):
        for b in range(n):
            ab = rows[a][b]
            for c in range(n):
                if rows[ab][c] != rows[a][rows[b][c]]:
                    raise LawViolation(
                        f"not associative at ({labels[a]},{labels[b]},{labels[c]})"
                    )
    inv = []
    for a in range(n):
        gens = [x for x in range(n) if rows[rows[a][x]][a] == a and rows[rows[x][a]][x] == x]
        if len(gens) != 1:
            raise LawViolation(
                f"element {labels[a]} has {len(gens)} generalized inverses, want exactly 1"
            )
        inv.append(gens[0])
    idems = [a for a in range(n) if rows[a][a] == a]
    for e in idems:
        for f in idems:
            if rows[e][f] != rows[f][e]:
                raise LawViolation(f"idempotents {labels[e]} and {labels[f]} do not commute")
    for a in range(n):
        if rows[0][a] != 0 or rows[a][0] != 0:
            raise LawViolation(f"element 0 is not absorbing against {labels[a]}")
    return FinInverseSemigroup(rows, tuple(inv), labels)


# ---------------------------------------------------------------------------
# partial-bijection generation

def _pmap_key(m: dict) -> tuple:
    return tuple(sorted(m.items()))


def _pmap_label(m: dict) -> str:
    if not m:
        return "0"
    return ",".join(f"{k}>{v}" for k, v in sorted(m.items()))


def _pmap_compose(f: dict, g: dict) -> dict:
    """f after g, as partial injections."""
    return {x: f[y] for x, y in g.items() if y in f}


def _pmap_inverse(f: dict) -> dict:
    return {v: k for k, v in f.items()}


def from_partial_maps(points: int, maps) -> tuple[FinInverseSemigroup, tuple[dict, ...]]:
    """Close partial injections on {1..points} under composition and inversion.

    The empty map is adjoined as the zero.  Returns the semigroup and the
    partial map realizing each element, aligned with element indices.
    """
    gens = []
    for m in maps:
        pm = {int(k): int(v) for k, v in m.items()}
        if len(set(pm.values())) != len(pm):
            raise LawViolation(f"generator {pm} is not injective")
        for k, v in pm.items():
            if not (1 <= k <= points and 1 <= v <= points):
                raise LawViolation(f"generator {pm} leaves 1..{points}")
        gens.append(pm)
    seen = {_pmap_key({}): {}}
    frontier = [{}]
    for g in gens:
        for h in (g, _pmap_inverse(g)):
            if _pmap_key(h) not in seen:
                seen[_pmap_key(h)] = h
                frontier.append(h)
    changed = True
    while changed:
        changed = False
        current = list(seen.values())
        for f in current:
            for g in current:
                for h in (_pmap_compose(f, g), _pmap_inverse(f)):
                    if _pmap_key(h) not in seen:
                        seen[_pmap_key(h)] = h
                        changed = True
    pmaps = sorted(seen.values(), key=lambda m: (len(m), _pmap_key(m)))
    idx = {_pmap_key(m): i for i, m in enumerate(pmaps)}
    table = [
        [idx[_pmap_key(_pmap_compose(f, g))] for g in pmaps]
        for f in pmaps
    ]
    labels = [_pmap_label(m) for m in pmaps]
    return validate(table, labels), tuple(pmaps)


# ---------------------------------------------------------------------------
# catalog

def i2() -> FinInverseSemigroup:
    """Symmetric inverse monoid on 2 points: 7 elements."""
    S, _ = from_partial_maps(2, [{1: 2, 2: 1}, {1: 1}])
    assert S.n == 7
    return S


def b2() -> FinInverseSemigroup:
    """Brandt semigroup with 5 elements, as partial bijections of 2 points."""
    S, _ = from_partial_maps(2, [{1: 2}])
    assert S.n == 5
    return S


def group_with_zero(table, labels=None) -> FinInverseSemigroup:
    """Adjoin a zero to a group multiplication table."""
    k = len(table)
    rows = [[0] * (k + 1)]
    for i in range(k):
        rows.append([0] + [table[i][j] + 1 for j in range(k)])
    if labels is not None:
        labels = ["0"] + list(labels)
    return validate(rows, labels)


def z2_with_zero() -> FinInverseSemigroup:
    return group_with_zero([[0, 1], [1, 0]], ["1", "g"])


def chain_semigroup(n: int) -> FinInverseSemigroup:
    """The chain 0 < e1 < ... < en as a commutative idempotent semigroup."""
    table = [[min(i, j) for j in range(n + 1)] for i in range(n + 1)]
    labels = ["0"] + [f"e{i}" for i in range(1, n + 1)]
    return validate(table, labels)


# ---------------------------------------------------------------------------
# order, compatibility, conjugation

def natural_leq(S: FinInverseSemigroup, a: int, b: int) -> bool:
    """a <= b: a equals b cut down to the domain of a."""
    return S.mul(b, S.d(a)) == a


def compatible(S: FinInverseSemigroup, a: int, b: int) -> bool:
    return S.is_idempotent(S.mul(S.inv[a], b)) and S.is_idempotent(S.mul(a, S.inv[b]))


def conjugate(S: FinInverseSemigroup, s: int, e: int) -> int:
    if not S.is_idempotent(e):
        raise LawViolation(f"element {S.label(e)} is not idempotent")
    return S.mul(S.mul(S.inv[s], e), s)


@lru_cache(maxsize=None)
def idempotent_semilattice(S: FinInverseSemigroup) -> tuple[FinMeetSemilattice, tuple[int, ...]]:
    """The idempotents under multiplication, plus their indices in S.

    Element i of the semilattice is the idempotent elems[i] of S, with the
    zero of S at position 0.
    """
    elems = tuple(a for a in range(S.n) if S.is_idempotent(a))
    assert elems[0] == 0
    pos = {a: i for i, a in enumerate(elems)}
    table = [[pos[S.mul(a, b)] for b in elems] for a in elems]
    labels = [S.label(a) for a in elems]
    return FinMeetSemilattice.from_meet(table, labels), elems


def semigroup_relations(S: FinInverseSemigroup, name: str) -> frozenset[XRelation]:
    """Builtin relation set over the idempotent semilattice of S."""
    E, _ = idempotent_semilattice(S)
    return builtin_relations(E, name)


# ---------------------------------------------------------------------------
# invariance and the action on characters

def _conj_e(S: FinInverseSemigroup, elems, pos, s: int, e_idx: int) -> int:
    """Conjugate in semilattice coordinates."""
    return pos[conjugate(S, s, elems[e_idx])]


def invariant_closure(S: FinInverseSemigroup, relations) -> frozenset[XRelation]:
    """Smallest relation set containing the input and stable under conjugation."""
    _, elems = idempotent_semilattice(S)
    pos = {a: i for i, a in enumerate(elems)}
    out = set(relations)
    frontier = list(out)
    while frontier:
        rel = frontier.pop()
        for s in range(S.n):
            e2 = _conj_e(S, elems, pos, s, rel.e)
            parts2 = frozenset(_conj_e(S, elems, pos, s, p) for p in rel.parts)
            cand = XRelation(e2, parts2)
            if cand not in out:
                out.add(cand)
                frontier.append(cand)
    return frozenset(out)


def act(S: FinInverseSemigroup, s: int, c: Character) -> Character:
    """Translate a character along s; defined when the character hits d(s)."""
    E, elems = idempotent_semilattice(S)
    g = elems[c.gen]
    if not natural_leq(S, g, S.d(s)):
        raise LawViolation(
            f"character at {S.label(g)} is outside the domain of {S.label(s)}"
        )
    moved = S.mul(S.mul(s, g), S.inv[s])
    pos = {a: i for i, a in enumerate(elems)}
    return Character(pos[moved])


def spectrum_invariant(S: FinInverseSemigroup, relations) -> bool:
    """The spectrum of the closed relation set is stable under the action."""
    E, elems = idempotent_semilattice(S)
    spec = spectrum(E, invariant_closure(S, relations))
    for c in spec:
        g = elems[c.gen]
        for s in range(S.n):
            if natural_leq(S, g, S.d(s)):
                if act(S, s, c) not in spec:
                    return False
    return True


def character_set_invariant(S: FinInverseSemigroup, chars) -> bool:
    """Is an arbitrary character set stable under the action."""
    chars = frozenset(chars)
    _, elems = idempotent_semilattice(S)
    for c in chars:
        g = elems[c.gen]
        for s in range(S.n):
            if natural_leq(S, g, S.d(s)) and act(S, s, c) not in chars:
                return False
    return True


# ---------------------------------------------------------------------------
# JSON interface

def invsgp_to_json(S: FinInverseSemigroup) -> str:
    doc = {
        "elements": list(S.labels),
        "mult": [list(r) for r in S.mult],
        "zero": S.labels[0],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def invsgp_from_json(text: str) -> FinInverseSemigroup:
    doc = json.loads(text)
    if "partial_maps" in doc:
        S, _ = from_partial_maps(doc["points"], doc["partial_maps"])
        return S
    try:
        labels = list(doc["elements"])
        table = doc["mult"]
        zero = doc["zero"]
    except (KeyError, TypeError):
        raise LawViolation("semigroup JSON needs 'elements', 'mult' and 'zero'") from None
    if zero not in labels:
        raise LawViolation(f"declared zero {zero!r} is not an element")
    z = labels.index(zero)
    if z != 0:
        # move the declared zero to index 0
        order = [z] + [i for i in range(len(labels)) if i != z]
        back = {old: new for new, old in enumerate(order)}
        table = [[back[table[a][b]] for b in order] for a in order]
        labels = [labels[i] for i in order]
    return validate(table, labels)
