import pytest

from xjoin import invsgp
from xjoin import semilattice as sl
from xjoin.semilattice import Character, LawViolation, XRelation


I2 = invsgp.i2()
B2 = invsgp.b2()


def s_idx(label):
    return I2.index(label)


def e_of(S):
    return invsgp.idempotent_semilattice(S)


def rel(e, parts):
    return XRelation(e, frozenset(parts))


class TestValidate:
    def test_i2_accepted(self):
        assert I2.n == 7

    def test_group_with_zero_accepted(self):
        S = invsgp.z2_with_zero()
        assert S.n == 3 and S.inv[2] == 2

    def test_left_zero_band_rejected(self):
        # xy = x: associative, all idempotent, but inverses are not unique
        table = [[0, 0], [1, 1]]
        with pytest.raises(LawViolation, match="generalized inverses"):
            invsgp.validate(table)

    def test_non_associative_rejected(self):
        table = [[0, 1], [1, 0]]  # no zero row; also fails absorbing law
        with pytest.raises(LawViolation):
            invsgp.validate(table)

    def test_zero_must_absorb(self):
        # a two-element semilattice with the wrong element first
        table = [[0, 0], [0, 1]]
        S = invsgp.validate(table)
        assert S.mul(0, 1) == 0
        bad = [[1, 1], [1, 1]]
        with pytest.raises(LawViolation):
            invsgp.validate(bad)


class TestPartialMaps:
    def test_i2_generation(self):
        S, pmaps = invsgp.from_partial_maps(2, [{1: 2, 2: 1}, {1: 1}])
        assert S.n == 7
        assert pmaps[0] == {}

    def test_b2_generation(self):
        S, _ = invsgp.from_partial_maps(2, [{1: 2}])
        assert S.n == 5

    def test_rejects_non_injective(self):
        with pytest.raises(LawViolation, match="injective"):
            invsgp.from_partial_maps(2, [{1: 1, 2: 1}])

    def test_idempotent_semilattices(self):
        E, elems = e_of(I2)
        assert E.n == 4
        assert set(E.labels) == {"0", "1>1", "2>2", "1>1,2>2"}
        E2, _ = e_of(B2)
        assert E2.n == 3
        assert E2.atoms() == (1, 2)
        Eg, _ = e_of(invsgp.z2_with_zero())
        assert Eg.n == 2


class TestOrderAndCompatibility:
    def test_restriction_below_identity(self):
        assert invsgp.natural_leq(I2, s_idx("1>1"), s_idx("1>1,2>2"))

    def test_swap_not_below_identity(self):
        assert not invsgp.natural_leq(I2, s_idx("1>2,2>1"), s_idx("1>1,2>2"))

    def test_zero_below_everything(self):
        assert all(invsgp.natural_leq(I2, 0, a) for a in range(I2.n))

    def test_idempotents_compatible(self):
        assert invsgp.compatible(I2, s_idx("1>1"), s_idx("2>2"))

    def test_identity_swap_incompatible(self):
        assert not invsgp.compatible(I2, s_idx("1>1,2>2"), s_idx("1>2,2>1"))

    def test_self_compatible(self):
        assert all(invsgp.compatible(I2, a, a) for a in range(I2.n))


class TestConjugation:
    def test_partial_map_conjugation(self):
        s = s_idx("1>2")
        assert invsgp.conjugate(I2, s, s_idx("2>2")) == s_idx("1>1")

    def test_identity_fixes(self):
        one = s_idx("1>1,2>2")
        for e in (0, s_idx("1>1"), s_idx("2>2"), one):
            assert invsgp.conjugate(I2, one, e) == e

    def test_zero_kills(self):
        assert invsgp.conjugate(I2, 0, s_idx("1>1")) == 0

    def test_rejects_non_idempotent(self):
        with pytest.raises(LawViolation, match="idempotent"):
            invsgp.conjugate(I2, 0, s_idx("1>2"))


class TestConjugationCarriesCovers:
    @pytest.mark.parametrize(
        "S",
        [I2, B2, invsgp.from_partial_maps(3, [{1: 2, 2: 3}])[0]],
        ids=["i2", "b2", "shift3"],
    )
    def test_minimal_covers_conjugate_to_covers(self, S):
        E, elems = invsgp.idempotent_semilattice(S)
        pos = {a: i for i, a in enumerate(elems)}
        for s in range(S.n):
            for e_idx in range(1, E.n):
                for cov in sl.minimal_covers(E, e_idx):
                    e2 = pos[invsgp.conjugate(S, s, elems[e_idx])]
                    if e2 == 0:
                        continue
                    parts2 = frozenset(
                        pos[invsgp.conjugate(S, s, elems[p])] for p in cov
                    )
                    assert sl.is_cover(E, e2, parts2)


class TestInvariantClosure:
    def test_cover_of_identity_closes(self):
        E, elems = e_of(I2)
        e1, e2, top = E.index("1>1"), E.index("2>2"), E.index("1>1,2>2")
        closed = invsgp.invariant_closure(I2, {rel(top, {e1, e2})})
        assert rel(e1, {e1, 0}) in closed
        assert rel(e2, {0, e2}) in closed

    def test_all_covers_set_is_invariant(self):
        # the set of every cover pair (zeros allowed) is literally stable
        # under conjugation; the minimal-cover subset is stable only at the
        # spectrum level
        E, _ = e_of(I2)
        from itertools import combinations

        all_covers = set()
        for e in range(E.n):
            pool = E.down(e)
            for size in range(len(pool) + 1):
                for combo in combinations(pool, size):
                    if sl.is_cover(E, e, combo) or e == 0:
                        all_covers.add(rel(e, combo))
        all_covers = frozenset(all_covers)
        assert invsgp.invariant_closure(I2, all_covers) == all_covers

    def test_tight_closure_preserves_spectrum(self):
        E, _ = e_of(I2)
        rels = invsgp.semigroup_relations(I2, "tight")
        closed = invsgp.invariant_closure(I2, rels)
        assert rels <= closed
        assert sl.spectrum(E, closed) == sl.spectrum(E, rels)

    def test_empty(self):
        assert invsgp.invariant_closure(I2, frozenset()) == frozenset()

    def test_idempotent_and_monotone(self):
        E, _ = e_of(I2)
        base = {rel(E.index("1>1,2>2"), {E.index("1>1")})}
        once = invsgp.invariant_closure(I2, base)
        assert invsgp.invariant_closure(I2, once) == once
        assert frozenset(base) <= once


class TestAction:
    def test_moves_generator(self):
        E, _ = e_of(I2)
        c = Character(E.index("1>1"))
        moved = invsgp.act(I2, s_idx("1>2"), c)
        assert moved == Character(E.index("2>2"))

    def test_idempotent_above_fixes(self):
        E, _ = e_of(I2)
        c = Character(E.index("1>1"))
        assert invsgp.act(I2, s_idx("1>1,2>2"), c) == c

    def test_outside_domain_rejected(self):
        E, _ = e_of(I2)
        top_char = Character(E.index("1>1,2>2"))
        with pytest.raises(LawViolation, match="domain"):
            invsgp.act(I2, s_idx("1>2"), top_char)


class TestSpectrumInvariance:
    @pytest.mark.parametrize("name", sl.BUILTIN_RELATION_SETS)
    def test_builtin_sets_on_i2(self, name):
        assert invsgp.spectrum_invariant(I2, invsgp.semigroup_relations(I2, name))

    def test_b2_tight(self):
        assert invsgp.spectrum_invariant(B2, invsgp.semigroup_relations(B2, "tight"))

    def test_closure_restores_invariance(self):
        E, _ = e_of(I2)
        top, e1 = E.index("1>1,2>2"), E.index("1>1")
        raw = {rel(top, {e1})}
        raw_spec = sl.spectrum(E, raw)
        # before closure: a character in the spectrum moves out of it
        moved = invsgp.act(I2, s_idx("1>2"), Character(e1))
        assert Character(e1) in raw_spec and moved not in raw_spec
        assert invsgp.spectrum_invariant(I2, raw)  # closure happens inside


class TestJson:
    def test_round_trip(self):
        back = invsgp.invsgp_from_json(invsgp.invsgp_to_json(I2))
        assert back == I2

    def test_generator_document(self):
        S = invsgp.invsgp_from_json('{"points": 2, "partial_maps": [{"1": "2"}]}')
        assert S.n == 5

    def test_zero_reordered(self):
        doc = """{"elements": ["x", "z"], "zero": "z",
                  "mult": [[0, 1], [1, 1]]}"""
        S = invsgp.invsgp_from_json(doc)
        assert S.labels[0] == "z"
        assert S.mul(0, 1) == 0

    def test_undeclared_zero_rejected(self):
        with pytest.raises(LawViolation, match="zero"):
            invsgp.invsgp_from_json('{"elements": ["a"], "mult": [[0]], "zero": "b"}')
