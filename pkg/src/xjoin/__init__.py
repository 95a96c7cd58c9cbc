"""Finite X-to-join machinery: semilattice spectra, Booleanizations, germ
groupoids, bisection algebras and inverse-hull combinatorics."""

from .semilattice import (
    Character,
    FinMeetSemilattice,
    LawViolation,
    XRelation,
    builtin_relations,
    chain,
    characters,
    diamond,
    is_cover,
    dense_in,
    spectrum,
    x_core,
    x_prime,
    x_tight,
)
from .boolalg import (
    BAMorphism,
    FinBooleanAlgebra,
    SemilatticeRep,
    basic_set,
    booleanization,
    is_proper,
    is_x_to_join,
    universal_extension,
    x_pi,
)
from .invsgp import (
    FinInverseSemigroup,
    act,
    compatible,
    conjugate,
    from_partial_maps,
    idempotent_semilattice,
    invariant_closure,
    natural_leq,
    spectrum_invariant,
    validate,
)
from .groupoid import FinGroupoid, Germ, germ_groupoid, germ_of, is_local_bisection, theta
from .bisection import (
    AdditiveMorphism,
    BisAlgebra,
    bis_algebra,
    check_presentation,
    check_variety_identities,
    congruence,
    difference,
    find_universal_morphism,
    iota,
    is_weakly_meet_preserving,
    skew_join,
    theorem_quotients_check,
)
from .lcmhull import (
    FreeMonoid,
    HullElement,
    NatPow,
    NRtimesNx,
    ZappaSzepProduct,
    adding_machine,
    gen_xa,
    gen_xu,
    hull_element,
    hull_idem_leq,
    hull_inv,
    hull_mul,
    is_foundation_set,
    lemma_found_check,
    zappa_szep,
)

__version__ = "0.1.0"
