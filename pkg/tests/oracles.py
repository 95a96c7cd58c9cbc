"""Independent brute-force oracles the tests check the library against.

Everything here works from first definitions (exhaustive enumeration over
maps, subsets, words), deliberately avoiding the library's own shortcuts.
"""

from __future__ import annotations

from itertools import combinations, product as iproduct

from xjoin.semilattice import Character, FinMeetSemilattice, XRelation, is_cover, spectrum


def brute_characters(E: FinMeetSemilattice) -> set[frozenset[int]]:
    """1-sets of all nonzero meet-preserving 0/1 maps."""
    out = set()
    for bits in iproduct((0, 1), repeat=E.n - 1):
        phi = (0,) + bits
        if not any(bits):
            continue
        if all(
            phi[E.meet(x, y)] == phi[x] * phi[y]
            for x in range(E.n)
            for y in range(E.n)
        ):
            out.add(frozenset(x for x in range(1, E.n) if phi[x]))
    return out


def all_covers(E: FinMeetSemilattice, x: int) -> list[frozenset[int]]:
    """Every cover of x from its nonzero downset, no minimality filter."""
    pool = [y for y in E.down(x) if y != 0]
    return [
        frozenset(c)
        for size in range(1, len(pool) + 1)
        for c in combinations(pool, size)
        if is_cover(E, x, c)
    ]


def tight_spectrum_all_covers(E: FinMeetSemilattice) -> frozenset[Character]:
    """Spectrum cut by every cover, not only the minimal ones."""
    rels = [XRelation(x, c) for x in range(1, E.n) for c in all_covers(E, x)]
    return spectrum(E, rels)


def count_bisections_brute(G) -> int:
    """Subset filter over all arrow sets; independent of the backtracker."""
    n = G.n_arrows
    count = 0
    for bits in range(1 << n):
        arrows = [a for a in range(n) if bits >> a & 1]
        srcs = [G.src[a] for a in arrows]
        rngs = [G.rng[a] for a in arrows]
        if len(set(srcs)) == len(arrows) and len(set(rngs)) == len(arrows):
            count += 1
    return count


def germs_equal_existential(S, s: int, t: int, f: int) -> bool:
    """The germ equivalence by its defining existential: some idempotent e
    with f below e and se = te."""
    for e in range(S.n):
        if S.is_idempotent(e) and S.mul(e, f) == f and S.mul(s, e) == S.mul(t, e):
            return True
    return False


# ---------------------------------------------------------------------------
# adding-machine relation sets, from the definitions

def _fmt_idem(w: str) -> str:
    return f"[{w or 'e'}.e,{w or 'e'}.e]"


def _fmt_a_idem(a: str) -> str:
    return f"[e.{a or 'e'},e.{a or 'e'}]"


def xa_oracle(depth: int) -> list[dict]:
    """Pairs (a, b) of g-powers with b in aA, by divisibility of exponents."""
    out = []
    for j in range(depth + 1):
        for k in range(depth + 1):
            if k >= j:
                out.append({"e": _fmt_a_idem("g" * j), "parts": [_fmt_a_idem("g" * k)]})
    return sorted(out, key=lambda d: (d["e"], len(d["parts"]), d["parts"]))


def _covers_all_words(alphabet: str, parts: frozenset[str], maxlen: int) -> bool:
    for w in iproduct(alphabet, repeat=maxlen):
        word = "".join(w)
        if not any(word.startswith(p) for p in parts):
            return False
    return True


def minimal_word_covers(alphabet: str, maxlen: int) -> list[frozenset[str]]:
    """Inclusion-minimal word sets meeting every infinite word, by subset scan."""
    universe = [""]
    for length in range(1, maxlen + 1):
        universe.extend("".join(w) for w in iproduct(alphabet, repeat=length))
    found: list[frozenset[str]] = []
    for size in range(1, len(universe) + 1):
        for combo in combinations(universe, size):
            cand = frozenset(combo)
            if any(prev <= cand for prev in found):
                continue
            if _covers_all_words(alphabet, cand, maxlen):
                found.append(cand)
    return found


def xu_oracle(depth: int) -> list[dict]:
    """Covering families of word idempotents, enumerated over all subsets."""
    alphabet = "01"
    universe = [""]
    for length in range(1, depth + 1):
        universe.extend("".join(w) for w in iproduct(alphabet, repeat=length))
    out = []
    for s in universe:
        for code in minimal_word_covers(alphabet, depth - len(s)):
            parts = sorted(_fmt_idem(s + u) for u in code)
            out.append({"e": _fmt_idem(s), "parts": parts})
    return sorted(out, key=lambda d: (d["e"], len(d["parts"]), d["parts"]))
