"""Finite Boolean algebras, semilattice representations and Booleanizations.

A finite Boolean algebra is the powerset of a canonical atom list, with
elements stored as bitmasks over the atoms.  The Booleanization of a
semilattice under a relation set X has the X-to-join spectrum as its atom
list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .semilattice import (
    Character,
    FinMeetSemilattice,
    LawViolation,
    XRelation,
    characters,
    spectrum,
    x_core,
    x_prime,
    x_tight,
)


@dataclass(frozen=True)
class FinBooleanAlgebra:
    """Powerset algebra over a list of named atoms; elements are bitmasks."""

    atom_labels: tuple[str, ...]

    @property
    def m(self) -> int:
        return len(self.atom_labels)

    @property
    def size(self) -> int:
        return 1 << self.m

    @property
    def top(self) -> int:
        return (1 << self.m) - 1

    def elements(self) -> range:
        return range(self.size)

    def atom(self, i: int) -> int:
        return 1 << i

    def atoms(self) -> tuple[int, ...]:
        return tuple(1 << i for i in range(self.m))

    def label(self, mask: int) -> str:
        if mask == 0:
            return "0"
        names = [self.atom_labels[i] for i in range(self.m) if mask >> i & 1]
        return "{" + ",".join(names) + "}"


@dataclass(frozen=True)
class SemilatticeRep:
    """A representation of a semilattice in a Boolean algebra, as an image table."""

    domain: FinMeetSemilattice
    codomain: FinBooleanAlgebra
    images: tuple[int, ...]

    @classmethod
    def build(cls, domain, codomain, images) -> "SemilatticeRep":
        images = tuple(int(v) for v in images)
        if len(images) != domain.n:
            raise LawViolation(f"{domain.n} elements but {len(images)} images")
        for v in images:
            if not 0 <= v < codomain.size:
                raise LawViolation(f"image {v} outside the codomain")
        if images[0] != 0:
            raise LawViolation(f"bottom maps to {codomain.label(images[0])}, not 0")
        for x in range(domain.n):
            for y in range(domain.n):
                got = images[domain.meet(x, y)]
                want = images[x] & images[y]
                if got != want:
                    raise LawViolation(
                        f"meet not preserved at ({domain.label(x)},{domain.label(y)}): "
                        f"{codomain.label(got)} != {codomain.label(want)}"
                    )
        return cls(domain, codomain, images)

    def apply(self, x: int) -> int:
        return self.images[x]


def is_proper(rep: SemilatticeRep) -> bool:
    """The images join to the top of the codomain."""
    acc = 0
    for v in rep.images:
        acc |= v
    return acc == rep.codomain.top


def is_x_to_join(rep: SemilatticeRep, relations) -> bool:
    """Proper, and every join constraint holds in the codomain."""
    if not is_proper(rep):
        return False
    for rel in relations:
        acc = 0
        for p in rel.parts:
            acc |= rep.images[p]
        if rep.images[rel.e] != acc:
            return False
    return True


def is_tight(rep: SemilatticeRep) -> bool:
    return is_x_to_join(rep, x_tight(rep.domain))


def is_prime(rep: SemilatticeRep) -> bool:
    return is_x_to_join(rep, x_prime(rep.domain))


def is_core(rep: SemilatticeRep) -> bool:
    return is_x_to_join(rep, x_core(rep.domain))


# ---------------------------------------------------------------------------
# structure tests on the domain, for the morphism characterizations

def has_all_joins(E: FinMeetSemilattice) -> bool:
    return all(E.join(x, y) is not None for x in range(E.n) for y in range(E.n))


def boolean_structure(E: FinMeetSemilattice) -> tuple[int, ...] | None:
    """Atom masks realizing E as a Boolean algebra, or None.

    Maps each element to the set of atoms below it and checks that this is
    an isomorphism onto the full powerset.
    """
    ats = E.atoms()
    if E.n != 1 << len(ats):
        return None
    masks = []
    for x in range(E.n):
        mask = 0
        for i, a in enumerate(ats):
            if E.leq(a, x):
                mask |= 1 << i
        masks.append(mask)
    if len(set(masks)) != E.n:
        return None
    for x in range(E.n):
        for y in range(E.n):
            if masks[E.meet(x, y)] != masks[x] & masks[y]:
                return None
    return tuple(masks)


def is_lattice_morphism(rep: SemilatticeRep) -> bool:
    """Proper and join-preserving; the domain must be a lattice."""
    E = rep.domain
    if not has_all_joins(E):
        raise LawViolation("domain does not admit binary joins")
    if not is_proper(rep):
        return False
    for x in range(E.n):
        for y in range(E.n):
            j = E.join(x, y)
            if rep.images[j] != rep.images[x] | rep.images[y]:
                return False
    return True


def is_ba_morphism(rep: SemilatticeRep) -> bool:
    """Proper and preserving 0, meet, join and difference; domain must be Boolean."""
    E = rep.domain
    masks = boolean_structure(E)
    if masks is None:
        raise LawViolation("domain is not a Boolean algebra")
    if not is_proper(rep):
        return False
    by_mask = {m: x for x, m in enumerate(masks)}
    for x in range(E.n):
        for y in range(E.n):
            jn = by_mask[masks[x] | masks[y]]
            df = by_mask[masks[x] & ~masks[y]]
            if rep.images[jn] != rep.images[x] | rep.images[y]:
                return False
            if rep.images[df] != rep.images[x] & ~rep.images[y]:
                return False
    return True


# ---------------------------------------------------------------------------
# Booleanization

def spectrum_atoms(E: FinMeetSemilattice, relations) -> tuple[Character, ...]:
    """The spectrum in canonical (generator) order: the atom list of the Booleanization."""
    return tuple(sorted(spectrum(E, relations)))


def booleanization(E: FinMeetSemilattice, relations) -> tuple[FinBooleanAlgebra, SemilatticeRep]:
    """Powerset algebra over the spectrum, with the canonical representation.

    The representation sends a to the set of spectrum characters whose
    generator lies below a.
    """
    atoms = spectrum_atoms(E, relations)
    B = FinBooleanAlgebra(tuple(E.label(c.gen) for c in atoms))
    images = []
    for a in range(E.n):
        mask = 0
        for i, c in enumerate(atoms):
            if E.leq(c.gen, a):
                mask |= 1 << i
        images.append(mask)
    rep = SemilatticeRep.build(E, B, images)
    if not is_x_to_join(rep, relations):
        raise LawViolation("canonical representation failed its own join constraints")
    return B, rep


def basic_set(E: FinMeetSemilattice, relations, a: int, excl=frozenset()) -> int:
    """Atom set of spectrum characters below a and below no excluded element."""
    excl = frozenset(excl)
    for b in excl:
        if not E.leq(b, a):
            raise LawViolation(f"excluded element {E.label(b)} is not below {E.label(a)}")
    atoms = spectrum_atoms(E, relations)
    mask = 0
    for i, c in enumerate(atoms):
        if E.leq(c.gen, a) and not any(E.leq(c.gen, b) for b in excl):
            mask |= 1 << i
    return mask


# ---------------------------------------------------------------------------
# morphisms of Boolean algebras and the universal extension

@dataclass(frozen=True)
class BAMorphism:
    """A Boolean-algebra morphism given by its atom images (pairwise disjoint)."""

    source: FinBooleanAlgebra
    target: FinBooleanAlgebra
    atom_images: tuple[int, ...]

    @classmethod
    def build(cls, source, target, atom_images) -> "BAMorphism":
        atom_images = tuple(int(v) for v in atom_images)
        if len(atom_images) != source.m:
            raise LawViolation(f"{source.m} atoms but {len(atom_images)} images")
        for i in range(len(atom_images)):
            for j in range(i + 1, len(atom_images)):
                if atom_images[i] & atom_images[j]:
                    raise LawViolation(
                        f"atom images of {source.atom_labels[i]} and "
                        f"{source.atom_labels[j]} are not disjoint"
                    )
        return cls(source, target, atom_images)

    def apply(self, mask: int) -> int:
        out = 0
        for i, img in enumerate(self.atom_images):
            if mask >> i & 1:
                out |= img
        return out

    def is_bijective(self) -> bool:
        return sorted(self.atom_images) == sorted(self.target.atoms())


def universal_extension(rep: SemilatticeRep, relations, *, verify_unique: bool = True) -> BAMorphism:
    """The morphism out of the Booleanization through which the representation factors.

    The image of the spectrum atom at generator g is
    rep(g) minus the join of rep over the maximal nonzero elements strictly
    below g.  When the codomain has at most 4 atoms and ``verify_unique`` is
    set, uniqueness is confirmed by exhaustive search.
    """
    if not is_x_to_join(rep, relations):
        raise LawViolation("representation does not satisfy the join constraints")
    E = rep.domain
    B, iota = booleanization(E, relations)
    atoms = spectrum_atoms(E, relations)
    images = []
    for c in atoms:
        g = c.gen
        below = [h for h in E.down(g) if h not in (0, g)]
        maximal = [h for h in below if not any(E.leq(h, k) and h != k for k in below)]
        img = rep.images[g]
        for b in maximal:
            img &= ~rep.images[b]
        images.append(img)
    psi = BAMorphism.build(B, rep.codomain, images)
    for a in range(E.n):
        if psi.apply(iota.images[a]) != rep.images[a]:
            raise LawViolation(f"extension does not factor the representation at {E.label(a)}")
    if verify_unique and rep.codomain.m <= 4:
        count = count_extensions(rep, relations, limit=2)
        if count != 1:
            raise LawViolation(f"expected a unique extension, search found {count}")
    return psi


def count_extensions(rep: SemilatticeRep, relations, limit: int = 2) -> int:
    """Number of Boolean-algebra morphisms factoring the representation.

    Disjointness of atom images lets every candidate be described by an
    ownership map from target atoms to source atoms (or none), so the
    search is exhaustive over (k+1)^m assignments.
    """
    E = rep.domain
    _, iota = booleanization(E, relations)
    k = len(iota.codomain.atom_labels)
    m = rep.codomain.m
    count = 0

    def rec(t_atom: int, images: list[int]):
        nonlocal count
        if count >= limit:
            return
        if t_atom == m:
            for a in range(E.n):
                acc = 0
                for i in range(k):
                    if iota.images[a] >> i & 1:
                        acc |= images[i]
                if acc != rep.images[a]:
                    return
            count += 1
            return
        bit = 1 << t_atom
        for owner in range(-1, k):
            if owner >= 0:
                images[owner] |= bit
            rec(t_atom + 1, images)
            if owner >= 0:
                images[owner] &= ~bit
    rec(0, [0] * k)
    return count


# ---------------------------------------------------------------------------
# relations carved out by a representation

def x_pi(rep: SemilatticeRep, max_size: int | None = None) -> frozenset[XRelation]:
    """All join constraints the representation itself satisfies.

    Emits every (e, parts) with the image of e equal to the join of the part
    images, for parts of size at most ``max_size`` (default: all subsets).
    """
    E = rep.domain
    if max_size is None:
        max_size = E.n
    out = []
    for e in range(E.n):
        target = rep.images[e]
        for size in range(0, max_size + 1):
            for combo in combinations(range(E.n), size):
                acc = 0
                for p in combo:
                    acc |= rep.images[p]
                if acc == target:
                    out.append(XRelation(e, frozenset(combo)))
    return frozenset(out)


def generated_subalgebra(B: FinBooleanAlgebra, seeds) -> frozenset[int]:
    """Closure of the seed masks under join, meet and difference."""
    els = set(seeds)
    els.add(0)
    changed = True
    while changed:
        changed = False
        current = list(els)
        for a in current:
            for b in current:
                for c in (a | b, a & b, a & ~b):
                    if c not in els:
                        els.add(c)
                        changed = True
    return frozenset(els)


def theorem_isom_check(rep: SemilatticeRep, max_size: int | None = None) -> bool:
    """A generating representation identifies its codomain with its own Booleanization."""
    gen = generated_subalgebra(rep.codomain, rep.images)
    if len(gen) != rep.codomain.size:
        raise LawViolation("image of the representation does not generate the codomain")
    rels = x_pi(rep, max_size)
    psi = universal_extension(rep, rels)
    return psi.is_bijective()


# ---------------------------------------------------------------------------
# JSON interface

def rep_to_json(rep: SemilatticeRep) -> str:
    doc = {
        "atoms": list(rep.codomain.atom_labels),
        "map": {
            rep.domain.label(x): sorted(
                rep.codomain.atom_labels[i]
                for i in range(rep.codomain.m)
                if rep.images[x] >> i & 1
            )
            for x in range(rep.domain.n)
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def rep_from_json(E: FinMeetSemilattice, text: str) -> SemilatticeRep:
    doc = json.loads(text)
    atom_labels = tuple(doc["atoms"])
    B = FinBooleanAlgebra(atom_labels)
    pos = {lbl: i for i, lbl in enumerate(atom_labels)}
    images = []
    for x in range(E.n):
        lbl = E.label(x)
        if lbl not in doc["map"]:
            raise LawViolation(f"representation JSON misses element {lbl!r}")
        mask = 0
        for a in doc["map"][lbl]:
            if a not in pos:
                raise LawViolation(f"unknown atom label {a!r}")
            mask |= 1 << pos[a]
        images.append(mask)
    return SemilatticeRep.build(E, B, images)
