"""Property suites over small and randomly generated instances.

Each suite returns (name, ok, detail) triples; the command line aggregates
them and the tests reuse them directly.  All randomness is seeded, so runs
are reproducible.
"""

from __future__ import annotations

import random
from itertools import combinations, product as iproduct

from . import boolalg, invsgp, lcmhull, semilattice
from .bisection import (
    check_presentation,
    check_variety_identities,
    iota,
)
from .groupoid import germ_groupoid, theta
from .semilattice import Character, FinMeetSemilattice, XRelation


def _catalog(max_size: int) -> list[FinMeetSemilattice]:
    out = [semilattice.chain(1), semilattice.chain(2), semilattice.chain(3),
           semilattice.diamond(), semilattice.antichain(2), semilattice.antichain(3)]
    if max_size >= 8:
        out.append(semilattice.powerset_semilattice(3))
    return [E for E in out if E.n <= max_size]


def brute_force_characters(E: FinMeetSemilattice) -> set[frozenset[int]]:
    """All nonzero meet-preserving 0/1 maps, as their 1-sets."""
    out = set()
    nonzero = range(1, E.n)
    for bits in iproduct((0, 1), repeat=E.n - 1):
        phi = (0,) + bits
        if not any(bits):
            continue
        if all(phi[E.meet(x, y)] == phi[x] * phi[y] for x in range(E.n) for y in range(E.n)):
            out.add(frozenset(x for x in nonzero if phi[x]))
    return out


def all_covers(E: FinMeetSemilattice, x: int) -> list[frozenset[int]]:
    """Every cover of x inside its nonzero downset, without minimality."""
    pool = [y for y in E.down(x) if y != 0]
    return [
        frozenset(c)
        for size in range(1, len(pool) + 1)
        for c in combinations(pool, size)
        if semilattice.is_cover(E, x, c)
    ]


def tight_spectrum_brute(E: FinMeetSemilattice) -> frozenset[Character]:
    """Spectrum constrained by every cover, not only the minimal ones."""
    rels = [XRelation(x, c) for x in range(1, E.n) for c in all_covers(E, x)]
    return semilattice.spectrum(E, rels)


def semilattice_suite(max_size: int = 8, samples: int = 20, seed: int = 7):
    rng = random.Random(seed)
    out = []
    pool = _catalog(max_size)
    pool.extend(semilattice.random_semilattice(rng, max_size) for _ in range(samples))

    ok = True
    for E in pool:
        chars = semilattice.characters(E)
        filters = {
            frozenset(x for x in range(1, E.n) if E.leq(c.gen, x)) for c in chars
        }
        if len(chars) != E.n - 1 or filters != brute_force_characters(E):
            ok = False
    out.append(("characters match brute-force filter enumeration", ok, ""))

    ok = True
    detail = ""
    for E in pool:
        atoms = frozenset(Character(a) for a in E.atoms())
        if semilattice.spectrum(E, semilattice.x_tight(E)) != atoms:
            ok, detail = False, f"at semilattice of size {E.n}"
            break
        if semilattice.spectrum(E, semilattice.x_tight(E)) != tight_spectrum_brute(E):
            ok, detail = False, f"minimal covers changed the spectrum, size {E.n}"
            break
    out.append(("tight spectrum equals the atoms, against all-covers oracle", ok, detail))

    ok = True
    for E in pool:
        for e in range(1, E.n):
            for f in E.down(e):
                if f and semilattice.dense_in(E, f, e) != semilattice.is_cover(E, e, (f,)):
                    ok = False
    out.append(("dense element iff singleton cover", ok, ""))

    ok = True
    for E in pool:
        tight = semilattice.spectrum(E, semilattice.x_tight(E))
        if not tight <= semilattice.spectrum(E, semilattice.x_prime(E)):
            ok = False
        if not tight <= semilattice.spectrum(E, semilattice.x_core(E)):
            ok = False
    out.append(("tight spectrum sits inside the prime and core spectra", ok, ""))
    return out


def boolalg_suite(max_size: int = 8):
    out = []
    pool = _catalog(max_size)
    ok = True
    detail = ""
    for E in pool:
        for name in semilattice.BUILTIN_RELATION_SETS:
            rels = semilattice.builtin_relations(E, name)
            B, rep = boolalg.booleanization(E, rels)
            gen = boolalg.generated_subalgebra(B, rep.images)
            if len(gen) != B.size:
                ok, detail = False, f"size {E.n}, {name}: image does not generate"
    out.append(("canonical images generate the Booleanization", ok, detail))

    ok = True
    for E in pool:
        for name in ("none", "tight"):
            rels = semilattice.builtin_relations(E, name)
            _, rep = boolalg.booleanization(E, rels)
            psi = boolalg.universal_extension(rep, rels)
            if not psi.is_bijective():
                ok = False
    out.append(("universal extension of the canonical map is the identity", ok, ""))

    ok = True
    for E in pool:
        if E.n > 6:
            continue
        for name in semilattice.BUILTIN_RELATION_SETS:
            rels = semilattice.builtin_relations(E, name)
            _, rep = boolalg.booleanization(E, rels)
            for c in semilattice.spectrum(E, boolalg.x_pi(rep)):
                hit = any(
                    all(E.leq(c.gen, x) == bool(rep.images[x] >> i & 1) for x in range(E.n))
                    for i in range(rep.codomain.m)
                )
                if not hit:
                    ok = False
    out.append(("spectrum characters factor through ultra characters", ok, ""))
    return out


def invsgp_suite(max_size: int = 10):
    out = []
    cat = [invsgp.i2(), invsgp.b2(), invsgp.z2_with_zero(), invsgp.chain_semigroup(3)]
    cat = [S for S in cat if S.n <= max_size]

    ok = True
    detail = ""
    for S in cat:
        E, elems = invsgp.idempotent_semilattice(S)
        for s in range(S.n):
            for e_idx in range(1, E.n):
                for cov in semilattice.minimal_covers(E, e_idx):
                    e2 = _conj_idx(S, elems, s, e_idx)
                    if e2 == 0:
                        continue
                    parts2 = frozenset(_conj_idx(S, elems, s, p) for p in cov)
                    if not semilattice.is_cover(E, e2, parts2):
                        ok, detail = False, f"{S.label(s)} breaks a cover in {S.n}-element semigroup"
    out.append(("conjugation carries covers to covers", ok, detail))

    ok = True
    for S in cat:
        for name in semilattice.BUILTIN_RELATION_SETS:
            rels = invsgp.semigroup_relations(S, name)
            closed = invsgp.invariant_closure(S, rels)
            if invsgp.invariant_closure(S, closed) != closed:
                ok = False
            if not rels <= closed:
                ok = False
            if not invsgp.spectrum_invariant(S, rels):
                ok = False
    out.append(("invariant closure is a closure and spectra are invariant", ok, ""))

    ok = True
    for S in cat:
        E, elems = invsgp.idempotent_semilattice(S)
        for c in semilattice.characters(E):
            g = elems[c.gen]
            for t in range(S.n):
                if not invsgp.natural_leq(S, g, S.d(t)):
                    continue
                ct = invsgp.act(S, t, c)
                for s in range(S.n):
                    lhs_ok = invsgp.natural_leq(S, elems[ct.gen], S.d(s))
                    st = S.mul(s, t)
                    rhs_ok = invsgp.natural_leq(S, g, S.d(st))
                    if lhs_ok != rhs_ok:
                        ok = False
                    elif lhs_ok and invsgp.act(S, s, ct) != invsgp.act(S, st, c):
                        ok = False
    out.append(("the character action composes like the product", ok, ""))
    return out


def _conj_idx(S, elems, s, e_idx):
    pos = {a: i for i, a in enumerate(elems)}
    return pos[invsgp.conjugate(S, s, elems[e_idx])]


def groupoid_suite(max_size: int = 10):
    out = []
    cat = [invsgp.i2(), invsgp.b2(), invsgp.chain_semigroup(3)]
    cat = [S for S in cat if S.n <= max_size]

    ok = True
    for S in cat:
        E, elems = invsgp.idempotent_semilattice(S)
        for name in ("none", "tight"):
            gg = germ_groupoid(S, invsgp.semigroup_relations(S, name))
            spec = set(gg.units)
            reps = {}
            for g in gg.germs:
                if g.rep in reps:
                    ok = False
                reps[g.rep] = g
            for a in range(1, S.n):
                da = S.d(a)
                in_spec = Character(list(elems).index(da)) in spec
                if in_spec != (a in reps):
                    ok = False
            G = gg.groupoid
            for ai in range(G.n_arrows):
                for bi in range(G.n_arrows):
                    c = G.comp[ai][bi]
                    if c >= 0:
                        prod = S.mul(gg.germs[ai].rep, gg.germs[bi].rep)
                        if gg.germs[c].rep != prod:
                            ok = False
    out.append(("arrows biject with elements with admissible domain", ok, ""))

    ok = True
    for S in cat:
        gg = germ_groupoid(S, frozenset())
        G = gg.groupoid
        for s in range(S.n):
            base = theta(gg, s)
            below = [t for t in range(S.n) if invsgp.natural_leq(S, t, s)]
            for k in range(0, min(2, len(below)) + 1):
                for excl in combinations(below, k):
                    got = theta(gg, s, excl)
                    want = set(base)
                    for t in excl:
                        want -= theta(gg, t)
                    if got != frozenset(want):
                        ok = False
                    from .groupoid import is_local_bisection
                    if not is_local_bisection(G, got):
                        ok = False
    out.append(("basic arrow sets are bisections and subtract as sets", ok, ""))
    return out


def bisection_suite(max_size: int = 10, budget: int = 250_000):
    out = []
    cat = [invsgp.i2(), invsgp.b2(), invsgp.chain_semigroup(3)]
    cat = [S for S in cat if S.n <= max_size]

    ok = True
    detail = ""
    for S in cat:
        for name in semilattice.BUILTIN_RELATION_SETS:
            rep = iota(S, invsgp.semigroup_relations(S, name))
            vr = check_variety_identities(rep.algebra, budget)
            if not vr.ok:
                ok, detail = False, f"{S.n}-element semigroup, {name}: {vr.first_failure()}"
    out.append(("variety identities hold on the bisection algebras", ok, detail))

    ok = True
    for S in cat:
        B = iota(S, frozenset()).algebra
        n = len(B)
        for i in range(n):
            for j in range(n):
                union_bis = B.elements[i] | B.elements[j] in B.index
                if B.compatible(i, j) != union_bis:
                    ok = False
    out.append(("compatibility test agrees with the union criterion", ok, ""))

    ok = True
    for S in cat:
        for name in semilattice.BUILTIN_RELATION_SETS:
            pr = check_presentation(S, invsgp.semigroup_relations(S, name))
            if not pr.ok:
                ok = False
    out.append(("generators and relations present the algebras", ok, ""))
    return out


def hull_suite(depth: int = 2):
    out = []
    monoids = [
        lcmhull.FreeMonoid("ab"),
        lcmhull.NatPow(2),
        lcmhull.NRtimesNx(),
    ]
    ok = True
    detail = ""
    for M in monoids:
        try:
            lcmhull._check_lcm_oracle(M, 3, 4)
        except Exception as exc:  # noqa: BLE001 - report any law failure
            ok, detail = False, f"{M!r}: {exc}"
    out.append(("lcm oracles agree with bounded ideal search", ok, detail))

    ok = True
    detail = ""
    for M in monoids:
        frag = [e for e in M.elements_up_to(depth)]
        els = [lcmhull.HULL_ZERO] + [
            lcmhull.hull_element(M, p, q) for p in frag for q in frag
        ]
        for x in els:
            for y in els:
                xy = lcmhull.hull_mul(M, x, y)
                for z in els:
                    lhs = lcmhull.hull_mul(M, xy, z)
                    rhs = lcmhull.hull_mul(M, x, lcmhull.hull_mul(M, y, z))
                    if lhs != rhs:
                        ok, detail = False, f"{M!r}: associativity fails"
        for x in els:
            xi = lcmhull.hull_inv(x)
            if lcmhull.hull_mul(M, lcmhull.hull_mul(M, x, xi), x) != x:
                ok, detail = False, f"{M!r}: inverse law fails"
        idems = [lcmhull.hull_element(M, p, p) for p in frag]
        for e in idems:
            for f in idems:
                if lcmhull.hull_mul(M, e, f) != lcmhull.hull_mul(M, f, e):
                    ok, detail = False, f"{M!r}: idempotents do not commute"
    out.append(("hull fragments behave as inverse semigroups", ok, detail))

    ok = True
    free = lcmhull.FreeMonoid("ab")
    cases = [
        (free, ["a", "b"]),
        (free, ["a"]),
        (free, ["a", "ba", "bb"]),
        (lcmhull.NatPow(2), [(1, 0)]),
    ]
    for M, F in cases:
        if not lcmhull.lemma_found_check(M, F, depth=4):
            ok = False
    out.append(("foundation sets match covers of the hull identity", ok, ""))
    return out


SUITES = {
    "semilattice": semilattice_suite,
    "boolalg": boolalg_suite,
    "invsgp": invsgp_suite,
    "groupoid": groupoid_suite,
    "bisection": bisection_suite,
    "hull": hull_suite,
}


def run_all(max_size: int = 8):
    results = []
    results.extend(semilattice_suite(max_size=max_size))
    results.extend(boolalg_suite(max_size=max_size))
    results.extend(invsgp_suite(max_size=max(max_size, 7)))
    results.extend(groupoid_suite(max_size=max(max_size, 7)))
    results.extend(bisection_suite(max_size=max(max_size, 7)))
    results.extend(hull_suite())
    return results
