"""Boolean inverse semigroups of local bisections of a finite groupoid.

Elements are arrow subsets on which source and range are injective,
enumerated by backtracking over per-unit occupancy.  The module carries the
canonical representation of an inverse semigroup into the bisection algebra
of its germ groupoid, the presentation and quotient checks, and the
universal-morphism machinery.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .boolalg import FinBooleanAlgebra, SemilatticeRep, is_x_to_join, universal_extension, x_pi
from .groupoid import FinGroupoid, Germ, GermGroupoid, germ_groupoid, theta
from .invsgp import (
    FinInverseSemigroup,
    character_set_invariant,
    idempotent_semilattice,
    invariant_closure,
)
from .semilattice import Character, LawViolation

ENUMERATION_WARN_ARROWS = 24


class BisAlgebra:
    """All local bisections of a finite groupoid, with the algebra operations.

    Elements are canonically ordered frozensets of arrow indices; index 0 is
    the empty bisection.  Operations are memoized on demand; memo writes are
    idempotent (every writer computes the same value), so concurrent readers
    stay consistent.
    """

    def __init__(self, groupoid: FinGroupoid):
        if groupoid.n_arrows > ENUMERATION_WARN_ARROWS:
            warnings.warn(
                f"enumerating local bisections of {groupoid.n_arrows} arrows "
                "is exponential", stacklevel=2,
            )
        self.groupoid = groupoid
        self.elements = tuple(
            sorted(_all_bisections(groupoid), key=lambda s: (len(s), sorted(s)))
        )
        self.index = {s: i for i, s in enumerate(self.elements)}
        self.zero = 0
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}
        self._d: dict[int, int] = {}
        self._r: dict[int, int] = {}
        self._diff: dict[tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def label(self, i: int) -> str:
        arrows = self.elements[i]
        if not arrows:
            return "0"
        G = self.groupoid
        return "{" + ",".join(G.arrow_labels[a] for a in sorted(arrows)) + "}"

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        got = self._mul.get(key)
        if got is not None:
            return got
        G = self.groupoid
        out = set()
        for a in self.elements[i]:
            for b in self.elements[j]:
                c = G.comp[a][b]
                if c >= 0:
                    out.add(c)
        k = self.index.get(frozenset(out))
        if k is None:
            raise LawViolation(
                f"product of {self.label(i)} and {self.label(j)} is not a bisection"
            )
        self._mul[key] = k
        return k

    def inv(self, i: int) -> int:
        got = self._inv.get(i)
        if got is None:
            G = self.groupoid
            got = self.index[frozenset(G.inv[a] for a in self.elements[i])]
            self._inv[i] = got
        return got

    def leq(self, i: int, j: int) -> bool:
        return self.elements[i] <= self.elements[j]

    def meet(self, i: int, j: int) -> int:
        return self.index[self.elements[i] & self.elements[j]]

    def is_idempotent(self, i: int) -> bool:
        G = self.groupoid
        return all(G.unit_arrow[G.src[a]] == a for a in self.elements[i])

    def d(self, i: int) -> int:
        got = self._d.get(i)
        if got is None:
            G = self.groupoid
            got = self.index[frozenset(G.unit_arrow[G.src[a]] for a in self.elements[i])]
            self._d[i] = got
        return got

    def r(self, i: int) -> int:
        got = self._r.get(i)
        if got is None:
            G = self.groupoid
            got = self.index[frozenset(G.unit_arrow[G.rng[a]] for a in self.elements[i])]
            self._r[i] = got
        return got

    def compatible(self, i: int, j: int) -> bool:
        return self.is_idempotent(self.mul(self.inv(i), j)) and self.is_idempotent(
            self.mul(i, self.inv(j))
        )

    def join(self, i: int, j: int) -> int:
        if not self.compatible(i, j):
            raise LawViolation(f"{self.label(i)} and {self.label(j)} are not compatible")
        k = self.index.get(self.elements[i] | self.elements[j])
        if k is None:
            raise LawViolation(
                f"union of compatible {self.label(i)} and {self.label(j)} is not a bisection"
            )
        return k

    def diff(self, i: int, j: int) -> int:
        """Arrows of i whose source and range avoid the sources and ranges of j."""
        got = self._diff.get((i, j))
        if got is None:
            G = self.groupoid
            srcs = {G.src[a] for a in self.elements[j]}
            rngs = {G.rng[a] for a in self.elements[j]}
            out = frozenset(
                a for a in self.elements[i] if G.src[a] not in srcs and G.rng[a] not in rngs
            )
            got = self.index[out]
            self._diff[(i, j)] = got
        return got

    def skew(self, i: int, j: int) -> int:
        return self.join(self.diff(i, j), j)

    # --- idempotents as unit masks -----------------------------------------

    def idem_mask(self, i: int) -> int:
        G = self.groupoid
        mask = 0
        for a in self.elements[i]:
            if G.unit_arrow[G.src[a]] != a:
                raise LawViolation(f"{self.label(i)} is not an idempotent")
            mask |= 1 << G.src[a]
        return mask

    def idem_element(self, mask: int) -> int:
        G = self.groupoid
        return self.index[
            frozenset(G.unit_arrow[u] for u in range(G.n_units) if mask >> u & 1)
        ]

    def unit_algebra(self) -> FinBooleanAlgebra:
        return FinBooleanAlgebra(self.groupoid.unit_labels)


def _all_bisections(G: FinGroupoid) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []
    stack: list[int] = []

    def rec(a: int, src_mask: int, rng_mask: int):
        if a == G.n_arrows:
            out.append(frozenset(stack))
            return
        rec(a + 1, src_mask, rng_mask)
        sbit, rbit = 1 << G.src[a], 1 << G.rng[a]
        if not (src_mask & sbit) and not (rng_mask & rbit):
            stack.append(a)
            rec(a + 1, src_mask | sbit, rng_mask | rbit)
            stack.pop()

    rec(0, 0, 0)
    return out


def bis_algebra(G: FinGroupoid) -> BisAlgebra:
    return BisAlgebra(G)


# ---------------------------------------------------------------------------
# difference and skew join by the defining formula

def difference(B: BisAlgebra, i: int, j: int) -> int:
    """(r(i) - r(j)) i (d(i) - d(j)), evaluated with the algebra operations."""
    left = B.diff(B.r(i), B.r(j))
    right = B.diff(B.d(i), B.d(j))
    return B.mul(B.mul(left, i), right)


def skew_join(B: BisAlgebra, i: int, j: int) -> int:
    """difference(i, j) joined with j; total on all pairs."""
    return B.join(difference(B, i, j), j)


# ---------------------------------------------------------------------------
# variety identities

@dataclass(frozen=True)
class VarietyReport:
    ok: bool
    exhaustive: bool
    checked: int
    failures: tuple[tuple[str, str], ...]

    def first_failure(self) -> str:
        return "" if self.ok else f"{self.failures[0][0]} at {self.failures[0][1]}"


def _identity_checks(B: BisAlgebra, x: int, y: int, z: int):
    d, r, mul, dif, skw, leq = B.d, B.r, B.mul, B.diff, B.skew, B.leq
    e, f, g = d(x), d(y), d(z)
    ef_diff = dif(e, f)
    ef_skew = skw(e, f)
    yield "1a", mul(ef_diff, ef_diff) == ef_diff
    yield "1b", mul(ef_skew, ef_skew) == ef_skew
    yield "2-meet-comm", mul(e, f) == mul(f, e)
    yield "2-join-comm", skw(e, f) == skw(f, e)
    yield "2-join-assoc", skw(skw(e, f), g) == skw(e, skw(f, g))
    yield "2-idem", mul(e, e) == e and skw(e, e) == e
    yield "2-absorb", mul(e, skw(e, f)) == e and skw(e, mul(e, f)) == e
    yield "2-distr-meet", mul(e, skw(f, g)) == skw(mul(e, f), mul(e, g))
    yield "2-distr-join", skw(e, mul(f, g)) == mul(skw(e, f), skw(e, g))
    yield "2-bottom", mul(e, B.zero) == B.zero and skw(e, B.zero) == e
    yield "2-complement", mul(ef_diff, f) == B.zero and skw(ef_diff, mul(e, f)) == e
    xy_diff = dif(x, y)
    xy_skew = skw(x, y)
    yield "3", leq(xy_diff, xy_skew) and leq(y, xy_skew)
    yield "4", d(xy_skew) == skw(d(xy_diff), d(y))
    yield "5", xy_diff == mul(mul(dif(r(x), r(y)), x), dif(d(x), d(y)))
    yield "6", mul(z, skw(ef_diff, f)) == skw(mul(z, ef_diff), mul(z, f))


def check_variety_identities(B: BisAlgebra, budget: int = 250_000) -> VarietyReport:
    """Evaluate the defining identities of the extended signature on triples.

    Exhaustive when the triple count fits the budget; otherwise a
    deterministic stride sample.  Reports the first counterexample per
    identity.
    """
    n = len(B)
    total = n * n * n
    exhaustive = total <= budget
    if exhaustive:
        triples = (
            (x, y, z) for x in range(n) for y in range(n) for z in range(n)
        )
    else:
        stride = total // budget + 1
        triples = (
            (t // (n * n), t // n % n, t % n) for t in range(0, total, stride)
        )
    failures: dict[str, str] = {}
    checked = 0
    for x, y, z in triples:
        checked += 1
        try:
            for name, ok in _identity_checks(B, x, y, z):
                if not ok and name not in failures:
                    failures[name] = f"({B.label(x)},{B.label(y)},{B.label(z)})"
        except LawViolation as exc:
            failures.setdefault("integrity", f"({B.label(x)},{B.label(y)},{B.label(z)}): {exc}")
    items = tuple(sorted(failures.items()))
    return VarietyReport(not items, exhaustive, checked, items)


# ---------------------------------------------------------------------------
# the canonical representation

@dataclass
class IotaRep:
    """The map s -> all germs of s, into the bisection algebra of the germ groupoid."""

    semigroup: FinInverseSemigroup
    relations: frozenset
    germs: GermGroupoid
    algebra: BisAlgebra
    images: tuple[int, ...]

    def idem_rep(self) -> SemilatticeRep:
        """Restriction to the idempotents, as a semilattice representation."""
        S = self.semigroup
        E, elems = idempotent_semilattice(S)
        BA = self.algebra.unit_algebra()
        images = [self.algebra.idem_mask(self.images[elems[i]]) for i in range(E.n)]
        return SemilatticeRep.build(E, BA, images)


def iota(S: FinInverseSemigroup, relations) -> IotaRep:
    """Build the germ groupoid and the canonical representation into its bisections.

    Verifies that the map is multiplicative, kills zero, and satisfies the
    join constraints on idempotents.
    """
    gg = germ_groupoid(S, relations)
    B = BisAlgebra(gg.groupoid)
    images = tuple(B.index[theta(gg, s)] for s in range(S.n))
    if images[0] != B.zero:
        raise LawViolation("zero has germs")
    for s in range(S.n):
        for t in range(S.n):
            if B.mul(images[s], images[t]) != images[S.mul(s, t)]:
                raise LawViolation(
                    f"canonical map not multiplicative at ({S.label(s)},{S.label(t)})"
                )
    rep = IotaRep(S, frozenset(relations), gg, B, images)
    if not is_x_to_join(rep.idem_rep(), relations):
        raise LawViolation("canonical map fails its join constraints on idempotents")
    return rep


# ---------------------------------------------------------------------------
# presentation check

@dataclass(frozen=True)
class PresentationReport:
    ok: bool
    relations_ok: bool
    generated: int
    total: int


def generated_subsemigroup(B: BisAlgebra, seeds) -> frozenset[int]:
    """Closure of the seeds under product, inverse, difference and skew join."""
    els = set(seeds)
    els.add(B.zero)
    changed = True
    while changed:
        changed = False
        current = list(els)
        for i in current:
            j = B.inv(i)
            if j not in els:
                els.add(j)
                changed = True
            for j in current:
                for k in (B.mul(i, j), B.diff(i, j), B.skew(i, j)):
                    if k not in els:
                        els.add(k)
                        changed = True
    return frozenset(els)


def check_presentation(S: FinInverseSemigroup, relations) -> PresentationReport:
    """The generators-and-relations description of the algebra of germs.

    Checks that the canonical generators kill zero, are multiplicative,
    satisfy the join constraints as iterated skew joins, and generate the
    whole algebra under the extended signature.
    """
    rep = iota(S, relations)
    B = rep.algebra
    rel_ok = rep.images[0] == B.zero
    for s in range(S.n):
        for t in range(S.n):
            if B.mul(rep.images[s], rep.images[t]) != rep.images[S.mul(s, t)]:
                rel_ok = False
    _, elems = idempotent_semilattice(S)
    for rel in relations:
        acc = B.zero
        for p in sorted(rel.parts):
            acc = B.skew(acc, rep.images[elems[p]])
        if acc != rep.images[elems[rel.e]]:
            rel_ok = False
    reached = generated_subsemigroup(B, rep.images)
    return PresentationReport(
        rel_ok and len(reached) == len(B), rel_ok, len(reached), len(B)
    )


# ---------------------------------------------------------------------------
# congruence from an invariant character set

@dataclass
class Congruence:
    algebra: BisAlgebra
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]


def _chi_unit_mask(full: IotaRep, chi) -> int:
    mask = 0
    for c in chi:
        try:
            u = full.germs.units.index(c)
        except ValueError:
            raise LawViolation(
                f"character at generator index {c.gen} is not a unit of the groupoid"
            ) from None
        mask |= 1 << u
    return mask


def congruence(full: IotaRep, chi) -> Congruence:
    """The congruence of an invariant character set on the universal algebra.

    Two elements are identified when their domains agree outside the ideal
    of idempotents missing the character set and the elements agree on the
    common part.  The partition is cross-checked against the kernel of the
    restriction map onto arrows based in the character set.
    """
    chi = frozenset(chi)
    S = full.semigroup
    if invariant_closure(S, full.relations) != frozenset():
        raise LawViolation("congruence needs the universal algebra (empty relation set)")
    if not character_set_invariant(S, chi):
        raise LawViolation("character set is not invariant under the action")
    B = full.algebra
    G = B.groupoid
    chi_mask = _chi_unit_mask(full, chi)
    n = len(B)
    d_mask = [B.idem_mask(B.d(i)) for i in range(n)]

    def literal_equiv(i: int, j: int) -> bool:
        # e ranges over idempotents below both domains; f, g exist in the
        # ideal iff the leftover domains avoid the character set, so only
        # the minimal choices f = d(i)-e and g = d(j)-e need be examined.
        common = d_mask[i] & d_mask[j]
        e = common
        while True:
            if not (d_mask[i] & ~e) & chi_mask and not (d_mask[j] & ~e) & chi_mask:
                idem = B.idem_element(e)
                if B.mul(i, idem) == B.mul(j, idem):
                    return True
            if e == 0:
                return False
            e = (e - 1) & common

    class_of = list(range(n))
    for i in range(n):
        if class_of[i] != i:
            continue
        for j in range(i + 1, n):
            if class_of[j] == j and literal_equiv(i, j):
                class_of[j] = i
    reps = sorted(set(class_of))
    renum = {rep: k for k, rep in enumerate(reps)}
    class_of = [renum[c] for c in class_of]
    classes = tuple(
        tuple(i for i in range(n) if class_of[i] == k) for k in range(len(reps))
    )

    # kernel of the restriction map
    keep = {a for a in range(G.n_arrows) if chi_mask >> G.src[a] & 1}
    kernel: dict[frozenset[int], list[int]] = {}
    for i in range(n):
        kernel.setdefault(frozenset(B.elements[i] & keep), []).append(i)
    kernel_classes = sorted(tuple(v) for v in kernel.values())
    if kernel_classes != sorted(classes):
        raise LawViolation("literal congruence disagrees with the restriction kernel")

    cong = Congruence(B, classes, tuple(class_of))
    _check_congruence(cong)
    return cong


def _check_congruence(cong: Congruence) -> None:
    B, cls = cong.algebra, cong.class_of
    n = len(B)
    seen_mul: dict[tuple[int, int], int] = {}
    for i in range(n):
        for j in range(n):
            key = (cls[i], cls[j])
            val = cls[B.mul(i, j)]
            if seen_mul.setdefault(key, val) != val:
                raise LawViolation("partition not compatible with the product")
    seen_inv: dict[int, int] = {}
    for i in range(n):
        if seen_inv.setdefault(cls[i], cls[B.inv(i)]) != cls[B.inv(i)]:
            raise LawViolation("partition not compatible with inversion")


# ---------------------------------------------------------------------------
# additive morphisms

@dataclass
class AdditiveMorphism:
    source: BisAlgebra
    target: BisAlgebra
    table: tuple[int, ...]

    @classmethod
    def build(cls, source, target, table) -> "AdditiveMorphism":
        m = cls(source, target, tuple(table))
        _check_additive(m)
        return m

    def apply(self, i: int) -> int:
        return self.table[i]


def _check_additive(m: AdditiveMorphism) -> None:
    B, T, t = m.source, m.target, m.table
    n = len(B)
    if len(t) != n:
        raise LawViolation(f"{n} elements but {len(t)} images")
    if t[B.zero] != T.zero:
        raise LawViolation("zero not preserved")
    for i in range(n):
        for j in range(n):
            if t[B.mul(i, j)] != T.mul(t[i], t[j]):
                raise LawViolation(
                    f"product not preserved at ({B.label(i)},{B.label(j)})"
                )
            if B.compatible(i, j):
                if not T.compatible(t[i], t[j]):
                    raise LawViolation(
                        f"compatibility not preserved at ({B.label(i)},{B.label(j)})"
                    )
                if t[B.join(i, j)] != T.join(t[i], t[j]):
                    raise LawViolation(
                        f"compatible join not preserved at ({B.label(i)},{B.label(j)})"
                    )
    # difference on idempotents, a consequence recorded as a direct check
    for i in range(n):
        if B.is_idempotent(i):
            for j in range(n):
                if B.is_idempotent(j) and t[B.diff(i, j)] != T.diff(t[i], t[j]):
                    raise LawViolation("idempotent difference not preserved")


def is_weakly_meet_preserving(m: AdditiveMorphism) -> bool:
    """Common lower bounds of images lift to common lower bounds."""
    B, T, t = m.source, m.target, m.table
    n = len(B)
    for d in range(len(T)):
        for a in range(n):
            if not T.leq(d, t[a]):
                continue
            for b in range(n):
                if not T.leq(d, t[b]):
                    continue
                if not any(
                    B.leq(c, a) and B.leq(c, b) and T.leq(d, t[c]) for c in range(n)
                ):
                    return False
    return True


# ---------------------------------------------------------------------------
# restriction morphism and the quotient theorem

def _restricted_groupoid(full: IotaRep, chi) -> tuple[FinGroupoid, tuple[Character, ...], tuple[Germ, ...], dict[int, int]]:
    gg = full.germs
    G = gg.groupoid
    units = tuple(sorted(chi))
    unit_old = [gg.units.index(c) for c in units]
    unit_new = {old: new for new, old in enumerate(unit_old)}
    keep = [a for a in range(G.n_arrows) if G.src[a] in unit_new]
    for a in keep:
        if G.rng[a] not in unit_new:
            raise LawViolation("character set is not invariant: a range escapes it")
    proj = {old: new for new, old in enumerate(keep)}
    # composability inside the restriction matches the ambient groupoid
    comp = [
        [proj[G.comp[a][b]] if G.comp[a][b] in proj else -1 for b in keep]
        for a in keep
    ]
    for ai, a in enumerate(keep):
        for bi, b in enumerate(keep):
            if (G.comp[a][b] >= 0) != (comp[ai][bi] >= 0):
                raise LawViolation("restriction lost a composite")
    restr = FinGroupoid.from_parts(
        unit_labels=tuple(G.unit_labels[u] for u in unit_old),
        arrow_labels=tuple(G.arrow_labels[a] for a in keep),
        src=[unit_new[G.src[a]] for a in keep],
        rng=[unit_new[G.rng[a]] for a in keep],
        unit_arrow=[proj[G.unit_arrow[u]] for u in unit_old],
        inv=[proj[G.inv[a]] for a in keep],
        comp=comp,
    )
    germs = tuple(gg.germs[a] for a in keep)
    return restr, units, germs, proj


def restriction_morphism(full: IotaRep, chi) -> AdditiveMorphism:
    """Cut every bisection down to the arrows based in the character set."""
    restr, _, _, proj = _restricted_groupoid(full, chi)
    target = BisAlgebra(restr)
    table = []
    for arrows in full.algebra.elements:
        cut = frozenset(proj[a] for a in arrows if a in proj)
        table.append(target.index[cut])
    return AdditiveMorphism.build(full.algebra, target, table)


@dataclass(frozen=True)
class QuotientReport:
    ok: bool
    class_count: int
    quotient_size: int
    spectrum_ok: bool
    germs_ok: bool
    bijective: bool
    weakly_meet_preserving: bool
    witness: tuple[tuple[int, int], ...]  # (class representative, quotient element)


def theorem_quotients_check(S: FinInverseSemigroup, chi) -> QuotientReport:
    """The quotient by an invariant character set is the algebra of the
    relation set carved out by the quotient composite.

    Builds the congruence and restriction morphism on one side and the germ
    groupoid of the carved-out relation set on the other, then matches them.
    """
    chi = frozenset(chi)
    full = iota(S, frozenset())
    cong = congruence(full, chi)
    morph = restriction_morphism(full, chi)
    _, _, restr_germs, _ = _restricted_groupoid(full, chi)

    # the composite of the canonical map and the quotient, restricted to
    # idempotents: images are character sets inside chi
    E, elems = idempotent_semilattice(S)
    chi_sorted = tuple(sorted(chi))
    BA = FinBooleanAlgebra(tuple(E.label(c.gen) for c in chi_sorted))
    images = []
    for e in range(E.n):
        mask = 0
        for i, c in enumerate(chi_sorted):
            if E.leq(c.gen, e):
                mask |= 1 << i
        images.append(mask)
    rep = SemilatticeRep.build(E, BA, images)
    rels = x_pi(rep)

    gq = germ_groupoid(S, rels)
    spectrum_ok = set(gq.units) == chi
    germs_ok = gq.germs == restr_germs
    B2 = BisAlgebra(gq.groupoid)

    image_set = set(morph.table)
    bijective = (
        len(image_set) == len(cong.classes)
        and len(image_set) == len(morph.target)
        and germs_ok
        and sorted(morph.target.elements) == sorted(B2.elements)
    )
    wmp = is_weakly_meet_preserving(morph)
    ok = spectrum_ok and germs_ok and bijective and wmp
    witness = tuple((cls[0], morph.table[cls[0]]) for cls in cong.classes)
    return QuotientReport(
        ok, len(cong.classes), len(B2), spectrum_ok, germs_ok, bijective, wmp, witness
    )


# ---------------------------------------------------------------------------
# the universal morphism

@dataclass
class UniversalResult:
    morphism: AdditiveMorphism
    unique: bool
    method: str


UNIQUENESS_SEARCH_LIMIT = 30


def _validate_representation(S: FinInverseSemigroup, target: BisAlgebra, phi, relations) -> SemilatticeRep:
    phi = tuple(phi)
    if len(phi) != S.n:
        raise LawViolation(f"{S.n} elements but {len(phi)} images")
    if phi[0] != target.zero:
        raise LawViolation("zero not preserved")
    for s in range(S.n):
        for t in range(S.n):
            if target.mul(phi[s], phi[t]) != phi[S.mul(s, t)]:
                raise LawViolation(
                    f"map not multiplicative at ({S.label(s)},{S.label(t)})"
                )
    E, elems = idempotent_semilattice(S)
    BA = target.unit_algebra()
    images = [target.idem_mask(phi[elems[i]]) for i in range(E.n)]
    rep = SemilatticeRep.build(E, BA, images)
    if not is_x_to_join(rep, relations):
        raise LawViolation("map does not satisfy the join constraints")
    return rep


def find_universal_morphism(S: FinInverseSemigroup, relations, target: BisAlgebra, phi) -> UniversalResult:
    """Factor a join-respecting representation through the algebra of germs.

    The morphism is assembled on single-arrow pieces and extended by
    compatible joins; uniqueness is settled by exhaustive constrained search
    for targets of at most UNIQUENESS_SEARCH_LIMIT elements, and by
    generator determinacy above that.
    """
    phi = tuple(phi)
    relations = frozenset(relations)
    rep = _validate_representation(S, target, phi, relations)
    closed = invariant_closure(S, relations)
    if not is_x_to_join(rep, closed):
        raise LawViolation("map fails the conjugated join constraints")
    uni = iota(S, relations)
    B = uni.algebra
    psi_e = universal_extension(rep, closed, verify_unique=False)

    _, elems = idempotent_semilattice(S)
    unit_singletons = []
    for c in uni.germs.units:
        atom_idx = psi_e.source.atom_labels.index(
            rep.domain.label(c.gen)
        )
        unit_singletons.append(target.idem_element(psi_e.atom_images[atom_idx]))

    table = []
    for arrows in B.elements:
        acc = target.zero
        for a in sorted(arrows):
            g = uni.germs.germs[a]
            piece = target.mul(phi[g.rep], unit_singletons[B.groupoid.src[a]])
            acc = target.join(acc, piece)
        table.append(acc)
    morph = AdditiveMorphism.build(B, target, table)
    for s in range(S.n):
        if morph.table[uni.images[s]] != phi[s]:
            raise LawViolation(f"morphism does not factor the map at {S.label(s)}")

    if len(target) <= UNIQUENESS_SEARCH_LIMIT:
        count = _count_additive_morphisms(B, target, dict(zip(uni.images, phi)), limit=2)
        if count != 1:
            raise LawViolation(f"expected a unique morphism, search found {count}")
        return UniversalResult(morph, True, "exhaustive")
    return UniversalResult(morph, True, "generators")


def _count_additive_morphisms(B: BisAlgebra, T: BisAlgebra, pins: dict[int, int], limit: int = 2) -> int:
    """Exhaustive count of additive morphisms extending the pinned images.

    Backtracking over element images, pruning with the product, inverse,
    zero and compatible-join constraints against everything already placed.
    """
    n = len(B)
    assign = [-1] * n
    assign[B.zero] = T.zero
    for k, v in pins.items():
        if assign[k] not in (-1, v):
            return 0
        assign[k] = v
    order = [i for i in range(n) if assign[i] < 0]
    count = 0

    def consistent(i: int) -> bool:
        for j in range(n):
            if assign[j] < 0:
                continue
            for a, b in ((i, j), (j, i)):
                k = B.mul(a, b)
                if assign[k] >= 0 and assign[k] != T.mul(assign[a], assign[b]):
                    return False
            if B.compatible(i, j):
                if not T.compatible(assign[i], assign[j]):
                    return False
                k = B.join(i, j)
                if assign[k] >= 0 and assign[k] != T.join(assign[i], assign[j]):
                    return False
        k = B.inv(i)
        if assign[k] >= 0 and assign[k] != T.inv(assign[i]):
            return False
        return True

    def valid_leaf() -> bool:
        # the incremental checks skip constraints whose result element was
        # assigned after both operands, so leaves get a full validation
        try:
            AdditiveMorphism.build(B, T, tuple(assign))
        except LawViolation:
            return False
        return True

    def rec(pos: int):
        nonlocal count
        if count >= limit:
            return
        if pos == len(order):
            if valid_leaf():
                count += 1
            return
        i = order[pos]
        for t in range(len(T)):
            assign[i] = t
            if consistent(i):
                rec(pos + 1)
            assign[i] = -1

    # the pins themselves must be mutually consistent
    for i in range(n):
        if assign[i] >= 0 and not consistent(i):
            return 0
    rec(0)
    return count


# ---------------------------------------------------------------------------
# JSON emission

def bis_to_json(B: BisAlgebra) -> str:
    from .groupoid import groupoid_to_json

    doc = {
        "groupoid": json.loads(groupoid_to_json(B.groupoid)),
        "elements": [sorted(s) for s in B.elements],
    }
    return json.dumps(doc, indent=2, sort_keys=True)
