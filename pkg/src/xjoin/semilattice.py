"""Finite meet-semilattices with bottom: order, covers, characters and spectra.

A semilattice is stored as an explicit n-by-n meet table over element
indices, with index 0 reserved for the bottom element.  Characters are
encoded by their principal-filter generator, so a spectrum is just a set
of nonzero element indices wrapped in :class:`Character`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations


class LawViolation(ValueError):
    """A finite structure failed one of its defining laws."""


@dataclass(frozen=True)
class FinMeetSemilattice:
    """Meet table over indices 0..n-1; index 0 is the bottom element."""

    meet_table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    @classmethod
    def from_meet(cls, table, labels=None) -> "FinMeetSemilattice":
        """Validate a meet table and build the semilattice.

        Raises :class:`LawViolation` naming the first violated law together
        with a witness.
        """
        rows = tuple(tuple(int(v) for v in row) for row in table)
        n = len(rows)
        if n == 0:
            raise LawViolation("semilattice needs at least the bottom element")
        if labels is None:
            labels = tuple("0" if i == 0 else f"x{i}" for i in range(n))
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise LawViolation(f"{n} elements but {len(labels)} labels")
        if len(set(labels)) != n:
            raise LawViolation("element labels are not distinct")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise LawViolation(f"meet table row {labels[i]} has length {len(row)}, want {n}")
            for v in row:
                if not 0 <= v < n:
                    raise LawViolation(f"meet table entry {v} out of range in row {labels[i]}")
        for x in range(n):
            if rows[x][x] != x:
                raise LawViolation(f"meet not idempotent: {labels[x]}^{labels[x]} = {labels[rows[x][x]]}")
        for x in range(n):
            for y in range(x + 1, n):
                if rows[x][y] != rows[y][x]:
                    raise LawViolation(
                        f"meet not commutative at ({labels[x]},{labels[y]}): "
                        f"{labels[rows[x][y]]} != {labels[rows[y][x]]}"
                    )
        for x in range(n):
            for y in range(n):
                xy = rows[x][y]
                for z in range(n):
                    if rows[xy][z] != rows[x][rows[y][z]]:
                        raise LawViolation(
                            f"meet not associative at ({labels[x]},{labels[y]},{labels[z]}): "
                            f"{labels[rows[xy][z]]} != {labels[rows[x][rows[y][z]]]}"
                        )
        for x in range(n):
            if rows[0][x] != 0:
                raise LawViolation(f"element 0 is not the bottom: 0^{labels[x]} = {labels[rows[0][x]]}")
        return cls(rows, labels)

    @property
    def n(self) -> int:
        return len(self.meet_table)

    def meet(self, x: int, y: int) -> int:
        return self.meet_table[x][y]

    def leq(self, x: int, y: int) -> bool:
        """x <= y in the natural order, i.e. x ^ y = x."""
        return self.meet_table[x][y] == x

    def down(self, x: int) -> tuple[int, ...]:
        return tuple(y for y in range(self.n) if self.leq(y, x))

    def atoms(self) -> tuple[int, ...]:
        """Minimal nonzero elements."""
        out = []
        for x in range(1, self.n):
            if all(y in (0, x) for y in self.down(x)):
                out.append(x)
        return tuple(out)

    def join(self, x: int, y: int) -> int | None:
        """Least upper bound of x and y, or None if it does not exist."""
        return self.join_of((x, y))

    def join_of(self, xs) -> int | None:
        xs = tuple(xs)
        ubs = [u for u in range(self.n) if all(self.leq(x, u) for x in xs)]
        for u in ubs:
            if all(self.leq(u, v) for v in ubs):
                return u
        return None

    def label(self, x: int) -> str:
        return self.labels[x]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LawViolation(f"unknown element label {label!r}") from None


# ---------------------------------------------------------------------------
# constructors

def from_subsets(family, labels=None) -> FinMeetSemilattice:
    """Semilattice of an intersection-closed family of sets, meet = intersection.

    The family must be closed under pairwise intersection; its minimum
    becomes the bottom element.
    """
    sets = sorted({frozenset(s) for s in family}, key=lambda s: (len(s), sorted(s)))
    if not sets:
        raise LawViolation("empty set family")
    idx = {s: i for i, s in enumerate(sets)}
    for a in sets:
        for b in sets:
            if a & b not in idx:
                raise LawViolation(f"family not intersection-closed at {set(a)} & {set(b)}")
    bottom = sets[0]
    for s in sets:
        if not (bottom <= s):
            raise LawViolation("family has no minimum element")
    table = [[idx[a & b] for b in sets] for a in sets]
    return FinMeetSemilattice.from_meet(table, labels)


def chain(n: int) -> FinMeetSemilattice:
    """The chain 0 < e1 < ... < en  (n+1 elements)."""
    table = [[min(i, j) for j in range(n + 1)] for i in range(n + 1)]
    labels = ["0"] + [f"e{i}" for i in range(1, n + 1)]
    return FinMeetSemilattice.from_meet(table, labels)


def diamond() -> FinMeetSemilattice:
    """{0, a, b, 1} with a, b incomparable atoms below 1."""
    return from_subsets([frozenset(), {1}, {2}, {1, 2}], ["0", "a", "b", "1"])


def antichain(k: int) -> FinMeetSemilattice:
    """Bottom plus k pairwise-incomparable atoms."""
    fam = [frozenset()] + [frozenset({i}) for i in range(1, k + 1)]
    labels = ["0"] + [f"a{i}" for i in range(1, k + 1)]
    return from_subsets(fam, labels)


def powerset_semilattice(k: int) -> FinMeetSemilattice:
    """The Boolean lattice of all subsets of a k-element set."""
    ground = list(range(1, k + 1))
    fam = []
    for r in range(k + 1):
        fam.extend(frozenset(c) for c in combinations(ground, r))
    fam.sort(key=lambda s: (len(s), sorted(s)))
    labels = ["{" + ",".join(str(i) for i in sorted(s)) + "}" if s else "0" for s in fam]
    return from_subsets(fam, labels)


def random_semilattice(rng, max_size: int = 10, ground: int = 5) -> FinMeetSemilattice:
    """Random intersection-closed family over a small ground set."""
    while True:
        k = rng.randint(2, max(2, max_size))
        sets = {frozenset()}
        for _ in range(k):
            sets.add(frozenset(i for i in range(ground) if rng.random() < 0.5))
        changed = True
        while changed:
            changed = False
            for a in list(sets):
                for b in list(sets):
                    if a & b not in sets:
                        sets.add(a & b)
                        changed = True
        if 2 <= len(sets) <= max_size:
            return from_subsets(sets)


# ---------------------------------------------------------------------------
# covers and denseness

def is_cover(E: FinMeetSemilattice, x: int, parts, *, restricted: bool = True) -> bool:
    """Does the set cover x: every nonzero y <= x meets some element of the set.

    Zeros in `parts` are dropped.  With ``restricted`` (the default) every
    remaining element must lie below x, otherwise the input is rejected;
    ``restricted=False`` runs the same check without that requirement.
    """
    zs = frozenset(parts) - {0}
    if restricted:
        for z in zs:
            if not E.leq(z, x):
                raise LawViolation(f"cover element {E.label(z)} is not below {E.label(x)}")
    for y in range(1, E.n):
        if E.leq(y, x) and all(E.meet(y, z) == 0 for z in zs):
            return False
    return True


def dense_in(E: FinMeetSemilattice, f: int, e: int) -> bool:
    """f is dense in e: f <= e and {f} covers e."""
    if not E.leq(f, e):
        raise LawViolation(f"{E.label(f)} is not below {E.label(e)}")
    return is_cover(E, e, (f,))


def minimal_covers(E: FinMeetSemilattice, x: int) -> list[frozenset[int]]:
    """All inclusion-minimal covers of a nonzero x drawn from its nonzero downset."""
    pool = [y for y in E.down(x) if y != 0]
    found: list[frozenset[int]] = []
    for size in range(1, len(pool) + 1):
        for combo in combinations(pool, size):
            cand = frozenset(combo)
            if any(prev <= cand for prev in found):
                continue
            if is_cover(E, x, cand):
                found.append(cand)
    return found


# ---------------------------------------------------------------------------
# characters and X-to-join spectra

@dataclass(frozen=True, order=True)
class Character:
    """A character encoded by its principal-filter generator."""

    gen: int


@dataclass(frozen=True)
class XRelation:
    """One join constraint: the element e against a finite set of parts."""

    e: int
    parts: frozenset[int]


def relation(e: int, parts) -> XRelation:
    return XRelation(e, frozenset(parts))


def relation_sort_key(rel: XRelation):
    return (rel.e, len(rel.parts), sorted(rel.parts))


def characters(E: FinMeetSemilattice) -> frozenset[Character]:
    """All characters: one per nonzero element in the finite case."""
    return frozenset(Character(g) for g in range(1, E.n))


def char_evaluate(E: FinMeetSemilattice, c: Character, x: int) -> bool:
    return E.leq(c.gen, x)


def char_satisfies(E: FinMeetSemilattice, c: Character, rel: XRelation) -> bool:
    """The join constraint holds at c: c(e) = 1 iff c(e_i) = 1 for some i."""
    lhs = E.leq(c.gen, rel.e)
    rhs = any(E.leq(c.gen, p) for p in rel.parts)
    return lhs == rhs


def spectrum(E: FinMeetSemilattice, relations) -> frozenset[Character]:
    rels = tuple(relations)
    return frozenset(
        c for c in characters(E) if all(char_satisfies(E, c, r) for r in rels)
    )


def x_tight(E: FinMeetSemilattice) -> frozenset[XRelation]:
    """Join constraints for all inclusion-minimal covers of nonzero elements."""
    out = []
    for x in range(1, E.n):
        for cov in minimal_covers(E, x):
            out.append(XRelation(x, cov))
    return frozenset(out)


def x_prime(E: FinMeetSemilattice) -> frozenset[XRelation]:
    """Constraints for minimal covers whose join exists and equals the element."""
    out = []
    for x in range(1, E.n):
        pool = [y for y in E.down(x) if y != 0]
        found: list[frozenset[int]] = []
        for size in range(1, len(pool) + 1):
            for combo in combinations(pool, size):
                cand = frozenset(combo)
                if any(prev <= cand for prev in found):
                    continue
                if E.join_of(cand) == x and is_cover(E, x, cand):
                    found.append(cand)
        out.extend(XRelation(x, cov) for cov in found)
    return frozenset(out)


def x_core(E: FinMeetSemilattice) -> frozenset[XRelation]:
    """Constraints identifying every element with each element dense in it."""
    out = []
    for e in range(1, E.n):
        for f in E.down(e):
            if f != 0 and dense_in(E, f, e):
                out.append(XRelation(e, frozenset((f,))))
    return frozenset(out)


BUILTIN_RELATION_SETS = ("none", "tight", "prime", "core")


def builtin_relations(E: FinMeetSemilattice, name: str) -> frozenset[XRelation]:
    if name == "none":
        return frozenset()
    if name == "tight":
        return x_tight(E)
    if name == "prime":
        return x_prime(E)
    if name == "core":
        return x_core(E)
    raise LawViolation(f"unknown relation set {name!r}, want one of {BUILTIN_RELATION_SETS}")


# ---------------------------------------------------------------------------
# JSON interface

def semilattice_to_json(E: FinMeetSemilattice) -> str:
    doc = {"elements": list(E.labels), "meet": [list(r) for r in E.meet_table]}
    return json.dumps(doc, indent=2, sort_keys=True)


def semilattice_from_json(text: str) -> FinMeetSemilattice:
    doc = json.loads(text)
    try:
        labels = doc["elements"]
        table = doc["meet"]
    except (KeyError, TypeError):
        raise LawViolation("semilattice JSON needs 'elements' and 'meet'") from None
    return FinMeetSemilattice.from_meet(table, labels)


def relations_to_json(E: FinMeetSemilattice, rels) -> str:
    doc = [
        {"e": E.label(r.e), "parts": sorted(E.label(p) for p in r.parts)}
        for r in sorted(rels, key=relation_sort_key)
    ]
    return json.dumps(doc, indent=2, sort_keys=True)


def relations_from_json(E: FinMeetSemilattice, text: str) -> frozenset[XRelation]:
    doc = json.loads(text)
    out = []
    for item in doc:
        e = E.index(item["e"])
        parts = frozenset(E.index(p) for p in item["parts"])
        out.append(XRelation(e, parts))
    return frozenset(out)
