import pytest

from xjoin import invsgp
from xjoin import semilattice as sl
from xjoin.bisection import (
    AdditiveMorphism,
    BisAlgebra,
    bis_algebra,
    bis_to_json,
    check_presentation,
    check_variety_identities,
    congruence,
    difference,
    find_universal_morphism,
    iota,
    is_weakly_meet_preserving,
    restriction_morphism,
    skew_join,
    theorem_quotients_check,
)
from xjoin.groupoid import FinGroupoid, germ_groupoid
from xjoin.semilattice import Character, LawViolation

from oracles import count_bisections_brute


I2 = invsgp.i2()
E_I2, _ = invsgp.idempotent_semilattice(I2)


def rels(S, name):
    return invsgp.semigroup_relations(S, name)


def one_unit_groupoid():
    return FinGroupoid.from_parts(("u",), ("id",), (0,), (0,), (0,), (0,), ((0,),))


class TestEnumeration:
    def test_tight_algebra_of_i2(self):
        B = iota(I2, rels(I2, "tight")).algebra
        assert len(B) == 7

    def test_universal_algebra_of_i2(self):
        B = iota(I2, frozenset()).algebra
        assert len(B) == 21

    def test_single_unit(self):
        assert len(bis_algebra(one_unit_groupoid())) == 2

    def test_counts_against_subset_filter(self):
        for name in ("none", "tight"):
            gg = germ_groupoid(I2, rels(I2, name))
            assert len(bis_algebra(gg.groupoid)) == count_bisections_brute(gg.groupoid)

    def test_pair_groupoid_on_three_points(self):
        # the tight groupoid of the 3-point shift semigroup carries the
        # partial injections on 3 points: 1 + 9 + 18 + 6 of them
        S, _ = invsgp.from_partial_maps(3, [{1: 2, 2: 3}])
        gg = germ_groupoid(S, rels(S, "tight"))
        B = bis_algebra(gg.groupoid)
        assert len(B) == 34
        assert len(B) == count_bisections_brute(gg.groupoid)

    def test_products_are_bisections_and_reverse(self):
        B = iota(I2, frozenset()).algebra
        for i in range(len(B)):
            for j in range(len(B)):
                k = B.mul(i, j)
                assert B.inv(k) == B.mul(B.inv(j), B.inv(i))

    def test_idempotents_are_unit_subsets(self):
        B = iota(I2, frozenset()).algebra
        for i in range(len(B)):
            assert B.is_idempotent(i) == (B.mul(i, i) == i)
        n_units = B.groupoid.n_units
        assert sum(B.is_idempotent(i) for i in range(len(B))) == 2 ** n_units


class TestDifferenceAndSkew:
    def test_self_difference_vanishes(self):
        B = iota(I2, rels(I2, "tight")).algebra
        for i in range(len(B)):
            assert difference(B, i, i) == B.zero
            assert skew_join(B, i, i) == i

    def test_idempotent_case_is_set_difference(self):
        B = iota(I2, frozenset()).algebra
        idems = [i for i in range(len(B)) if B.is_idempotent(i)]
        for i in idems:
            for j in idems:
                want = B.index[B.elements[i] - B.elements[j]]
                assert difference(B, i, j) == want
                assert skew_join(B, i, j) == B.index[B.elements[i] | B.elements[j]]

    def test_tight_identity_minus_restriction(self):
        rep = iota(I2, rels(I2, "tight"))
        B = rep.algebra
        got = difference(B, rep.images[I2.index("1>1,2>2")], rep.images[I2.index("1>1")])
        # what remains is the unit at the other character
        assert B.elements[got] == B.elements[rep.images[I2.index("2>2")]]

    def test_formula_equals_arrow_filter(self):
        B = iota(I2, frozenset()).algebra
        for i in range(len(B)):
            for j in range(len(B)):
                assert difference(B, i, j) == B.diff(i, j)

    def test_compatible_join_is_union(self):
        B = iota(I2, frozenset()).algebra
        for i in range(len(B)):
            for j in range(len(B)):
                if B.compatible(i, j):
                    assert B.elements[B.skew(i, j)] == B.elements[i] | B.elements[j]
                    assert B.leq(i, B.skew(i, j)) and B.leq(j, B.skew(i, j))


class TestVarietyIdentities:
    @pytest.mark.parametrize("name", sl.BUILTIN_RELATION_SETS)
    def test_i2_algebras(self, name):
        report = check_variety_identities(iota(I2, rels(I2, name)).algebra)
        assert report.ok and report.exhaustive

    def test_sampled_mode_under_budget(self):
        B = iota(I2, frozenset()).algebra
        report = check_variety_identities(B, budget=500)
        assert report.ok and not report.exhaustive
        assert report.checked <= 500

    def test_corrupted_product_is_caught(self):
        B = iota(I2, rels(I2, "tight")).algebra
        z = next(
            i for i in range(len(B)) if not B.is_idempotent(i) and i != B.zero
        )
        # poison the product against the full unit set: the left side of
        # identity (6) consults it, the right side does not
        full = B.idem_element((1 << B.groupoid.n_units) - 1)
        B._mul[(z, full)] = B.zero
        report = check_variety_identities(B)
        assert not report.ok
        assert any(name == "6" for name, _ in report.failures)
        assert report.first_failure()


class TestIota:
    def test_tight_is_injective_onto_seven(self):
        rep = iota(I2, rels(I2, "tight"))
        assert len(set(rep.images)) == I2.n
        assert len(rep.algebra) == 7

    def test_zero_image(self):
        rep = iota(I2, frozenset())
        assert rep.images[0] == rep.algebra.zero

    def test_idempotent_semigroup_matches_semilattice_picture(self):
        S = invsgp.chain_semigroup(3)
        rep = iota(S, rels(S, "prime"))
        from xjoin import boolalg
        E, elems = invsgp.idempotent_semilattice(S)
        _, can = boolalg.booleanization(E, rels(S, "prime"))
        # unit sets of the semigroup map match the semilattice images
        for e_idx in range(E.n):
            assert rep.algebra.idem_mask(rep.images[elems[e_idx]]) == can.images[e_idx]


class TestPresentation:
    @pytest.mark.parametrize("name", ("none", "tight"))
    def test_i2(self, name):
        report = check_presentation(I2, rels(I2, name))
        assert report.ok
        assert report.generated == report.total

    def test_b2_tight(self):
        assert check_presentation(invsgp.b2(), rels(invsgp.b2(), "tight")).ok


class TestCongruence:
    def test_tight_collapse_counts(self):
        full = iota(I2, frozenset())
        chi = sl.spectrum(E_I2, rels(I2, "tight"))
        cong = congruence(full, chi)
        assert len(cong.classes) == 7

    def test_full_spectrum_identity(self):
        full = iota(I2, frozenset())
        chi = sl.spectrum(E_I2, frozenset())
        assert len(congruence(full, chi).classes) == 21

    def test_empty_spectrum_total_collapse(self):
        full = iota(I2, frozenset())
        assert len(congruence(full, frozenset()).classes) == 1

    def test_rejects_non_invariant_set(self):
        full = iota(I2, frozenset())
        lone = frozenset({Character(E_I2.index("1>1"))})
        with pytest.raises(LawViolation, match="invariant"):
            congruence(full, lone)

    def test_rejects_non_universal_algebra(self):
        tight_rep = iota(I2, rels(I2, "tight"))
        with pytest.raises(LawViolation, match="universal"):
            congruence(tight_rep, frozenset())


def invariant_spectra(S):
    E, _ = invsgp.idempotent_semilattice(S)
    chars = sorted(sl.characters(E))
    out = []
    for bits in range(1 << len(chars)):
        chi = frozenset(c for i, c in enumerate(chars) if bits >> i & 1)
        if invsgp.character_set_invariant(S, chi):
            out.append(chi)
    return out


class TestQuotientTheorem:
    def test_i2_every_invariant_spectrum(self):
        spectra = invariant_spectra(I2)
        assert len(spectra) == 4
        for chi in spectra:
            report = theorem_quotients_check(I2, chi)
            assert report.ok, (sorted(c.gen for c in chi), report)
            assert report.class_count == report.quotient_size
            assert report.weakly_meet_preserving

    def test_b2_every_invariant_spectrum(self):
        B2 = invsgp.b2()
        spectra = invariant_spectra(B2)
        assert len(spectra) == 2  # empty and full (= tight)
        for chi in spectra:
            assert theorem_quotients_check(B2, chi).ok

    def test_tight_sizes(self):
        chi = sl.spectrum(E_I2, rels(I2, "tight"))
        report = theorem_quotients_check(I2, chi)
        assert (report.class_count, report.quotient_size) == (7, 7)

    def test_shift_semigroup_collapse(self):
        # 238 bisections of the universal groupoid collapse onto the 34
        # partial injections of the tight one
        S, _ = invsgp.from_partial_maps(3, [{1: 2, 2: 3}])
        E, _ = invsgp.idempotent_semilattice(S)
        chi = sl.spectrum(E, rels(S, "tight"))
        report = theorem_quotients_check(S, chi)
        assert report.ok
        assert (report.class_count, report.quotient_size) == (34, 34)
        assert len(iota(S, frozenset()).algebra) == 238


class TestWeaklyMeetPreserving:
    def test_quotient_map(self):
        full = iota(I2, frozenset())
        chi = sl.spectrum(E_I2, rels(I2, "tight"))
        assert is_weakly_meet_preserving(restriction_morphism(full, chi))

    def test_identity(self):
        B = iota(I2, rels(I2, "tight")).algebra
        ident = AdditiveMorphism.build(B, B, tuple(range(len(B))))
        assert is_weakly_meet_preserving(ident)

    def test_group_collapse_is_not(self):
        # collapsing a two-element group onto the trivial one merges two
        # elements whose only common lower bound is zero
        source = iota(invsgp.z2_with_zero(), frozenset()).algebra
        target = iota(invsgp.group_with_zero([[0]]), frozenset()).algebra
        assert (len(source), len(target)) == (3, 2)
        table = tuple(0 if not source.elements[i] else 1 for i in range(3))
        collapse = AdditiveMorphism.build(source, target, table)
        assert not is_weakly_meet_preserving(collapse)

    def test_collapse_found_by_search(self):
        # the counterexample above is reachable by scanning all candidates
        source = iota(invsgp.z2_with_zero(), frozenset()).algebra
        target = iota(invsgp.group_with_zero([[0]]), frozenset()).algebra
        found = []
        for t1 in range(2):
            for t2 in range(2):
                try:
                    m = AdditiveMorphism.build(source, target, (0, t1, t2))
                except LawViolation:
                    continue
                found.append(m)
        assert any(not is_weakly_meet_preserving(m) for m in found)


class TestUniversalMorphism:
    def test_factor_through_self_is_identity(self):
        rep = iota(I2, rels(I2, "tight"))
        res = find_universal_morphism(I2, rels(I2, "tight"), rep.algebra, rep.images)
        assert res.unique and res.method == "exhaustive"
        assert res.morphism.table == tuple(range(len(rep.algebra)))

    def test_canonical_surjection_onto_tight(self):
        tight_rep = iota(I2, rels(I2, "tight"))
        res = find_universal_morphism(I2, frozenset(), tight_rep.algebra, tight_rep.images)
        assert res.unique
        assert len(set(res.morphism.table)) == len(tight_rep.algebra)

    def test_agrees_with_restriction_quotient(self):
        full = iota(I2, frozenset())
        chi = sl.spectrum(E_I2, rels(I2, "tight"))
        morph = restriction_morphism(full, chi)
        from xjoin import boolalg
        E, elems = invsgp.idempotent_semilattice(I2)
        chi_sorted = tuple(sorted(chi))
        BA = boolalg.FinBooleanAlgebra(tuple(E.label(c.gen) for c in chi_sorted))
        images = [
            sum(1 << i for i, c in enumerate(chi_sorted) if E.leq(c.gen, e))
            for e in range(E.n)
        ]
        carved = boolalg.x_pi(boolalg.SemilatticeRep.build(E, BA, images))
        phi = tuple(morph.table[full.images[s]] for s in range(I2.n))
        res = find_universal_morphism(I2, carved, morph.target, phi)
        assert res.unique
        assert len(set(res.morphism.table)) == len(morph.target)  # bijective

    def test_rejects_non_conforming_map(self):
        rep = iota(I2, frozenset())
        with pytest.raises(LawViolation, match="join constraints"):
            find_universal_morphism(I2, rels(I2, "tight"), rep.algebra, rep.images)

    def test_generator_determinacy_above_search_cutoff(self):
        # the doubled target has 49 elements, past the exhaustive-search
        # limit; the diagonal representation still factors uniquely
        rep = iota(I2, rels(I2, "tight"))
        G = rep.germs.groupoid
        doubled = _disjoint_double(G)
        target = bis_algebra(doubled)
        assert len(target) == 49
        offset = G.n_arrows
        phi = tuple(
            target.index[
                frozenset(rep.algebra.elements[rep.images[s]])
                | frozenset(a + offset for a in rep.algebra.elements[rep.images[s]])
            ]
            for s in range(I2.n)
        )
        res = find_universal_morphism(I2, rels(I2, "tight"), target, phi)
        assert res.unique and res.method == "generators"
        uni = iota(I2, rels(I2, "tight"))
        for s in range(I2.n):
            assert res.morphism.table[uni.images[s]] == phi[s]


def _disjoint_double(G: FinGroupoid) -> FinGroupoid:
    n, m = G.n_arrows, G.n_units
    comp = [[-1] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        for b in range(n):
            if G.comp[a][b] >= 0:
                comp[a][b] = G.comp[a][b]
                comp[a + n][b + n] = G.comp[a][b] + n
    return FinGroupoid.from_parts(
        unit_labels=[f"{u}/L" for u in G.unit_labels] + [f"{u}/R" for u in G.unit_labels],
        arrow_labels=[f"{a}/L" for a in G.arrow_labels] + [f"{a}/R" for a in G.arrow_labels],
        src=list(G.src) + [s + m for s in G.src],
        rng=list(G.rng) + [r + m for r in G.rng],
        unit_arrow=list(G.unit_arrow) + [u + n for u in G.unit_arrow],
        inv=list(G.inv) + [i + n for i in G.inv],
        comp=comp,
    )


class TestMorphismCounter:
    def test_matches_raw_enumeration(self):
        from itertools import product
        from xjoin.bisection import _count_additive_morphisms

        source = iota(invsgp.z2_with_zero(), frozenset()).algebra
        target = iota(I2, rels(I2, "tight")).algebra
        raw = 0
        for table in product(range(len(target)), repeat=len(source)):
            try:
                AdditiveMorphism.build(source, target, table)
            except LawViolation:
                continue
            raw += 1
        counted = _count_additive_morphisms(source, target, {}, limit=raw + 5)
        assert counted == raw
        assert raw >= 2  # at least the zero map and an embedding exist


class TestClosureEquivalence:
    def test_semigroup_maps_satisfy_x_iff_closure(self):
        # a multiplicative map conjugates its join constraints, so the
        # original and the closed relation set constrain it identically
        from xjoin.boolalg import is_x_to_join

        E, _ = invsgp.idempotent_semilattice(I2)
        top, e1, e2 = E.index("1>1,2>2"), E.index("1>1"), E.index("2>2")
        custom = frozenset({sl.XRelation(top, frozenset({e1, e2}))})
        relation_sets = [rels(I2, n) for n in sl.BUILTIN_RELATION_SETS] + [custom]
        reps = [iota(I2, rels(I2, n)).idem_rep() for n in sl.BUILTIN_RELATION_SETS]
        for X in relation_sets:
            closed = invsgp.invariant_closure(I2, X)
            for rep in reps:
                assert is_x_to_join(rep, X) == is_x_to_join(rep, closed)


class TestJsonEmission:
    def test_elements_reload_against_groupoid(self):
        import json
        from xjoin.groupoid import groupoid_from_json

        B = iota(I2, rels(I2, "tight")).algebra
        doc = json.loads(bis_to_json(B))
        G = groupoid_from_json(json.dumps(doc["groupoid"]))
        rebuilt = bis_algebra(G)
        assert [sorted(s) for s in rebuilt.elements] == doc["elements"]
