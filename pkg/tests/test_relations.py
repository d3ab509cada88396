import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relik.errors import InvalidAlgebra, InvalidRelation, ResourceLimit
from relik.lifting import geq_s, succ_prime, succ_s
from relik.preorders import Preorder, preorders_on, random_preorder, strict_orders_on, total_preorders_on
from relik.relations import (
    CHECKS,
    FiniteAlgebra,
    SetRelation,
    audit,
    format_relation_file,
    has_union_property,
    is_modular,
    is_orderly,
    is_qualitative,
    is_strict_partial_order,
    is_transitive,
    materialize,
    parse_relation_file,
    witness_refutes,
)

from support import incomparable_order

GOLDEN = __import__("pathlib").Path(__file__).parent / "golden" / "inputs"

LITERAL_PAIRS = [("ab", "c"), ("ac", "b"), ("abc", "b"), ("abc", "c"), ("abc", "bc")]


def three_element(with_empty=True):
    alg = FiniteAlgebra.powerset("abc")
    pairs = [(set(u), set(v)) for u, v in LITERAL_PAIRS]
    if with_empty:
        pairs += [(set(u), set()) for u in ("ab", "ac", "abc")]
    return SetRelation.from_pairs(alg, pairs)


def fs(s=()):
    return frozenset(s)


def assert_self_consistent(r):
    rep = audit(r)
    for name in CHECKS:
        w = rep[name].witness
        assert rep[name].holds == (w is None)
        if w is not None:
            assert witness_refutes(r, name, w), name


def test_three_element_relation_audit():
    r = parse_relation_file((GOLDEN / "orderly_not_qualitative.rel").read_text())
    assert r == three_element()
    rep = audit(r)
    assert rep["orderly"].holds and rep["union"].holds
    assert rep["strict_partial_order"].holds
    assert not rep["qualitative"].holds
    assert rep.witness_sets("qualitative") == (fs("a"), fs("b"), fs("c"))
    assert_self_consistent(r)


def test_literal_pairs_need_empty_set_for_orderliness():
    r = three_element(with_empty=False)
    rep = audit(r)
    assert not rep["orderly"].holds
    U, V, U2, V2 = rep.witness_sets("orderly")
    assert V2 == frozenset() and U <= U2 and r.holds(U, V)
    assert_self_consistent(r)


def test_succ_prime_lacks_union_property():
    r = materialize(succ_prime, incomparable_order())
    assert not has_union_property(r)
    W, w1, w2 = fs({"w1", "w2"}), fs({"w1"}), fs({"w2"})
    assert r.holds(W, w1) and r.holds(W, w2) and not r.holds(W, W)
    w = CHECKS["union"](r)
    assert tuple(r.algebra.member(m) for m in w) in {(W, w1, w2), (W, w2, w1)}


def test_empty_relation():
    r = SetRelation.from_pairs(FiniteAlgebra.powerset("ab"), [])
    rep = audit(r)
    for name in ("irreflexive", "transitive", "modular", "orderly", "union", "qualitative"):
        assert rep[name].holds, name
    assert not rep["reflexive"].holds and not rep["total"].holds
    assert rep["strict_partial_order"].holds
    assert_self_consistent(r)


def test_as_dict_shape():
    d = audit(three_element()).as_dict()
    assert d["qualitative"] == {"holds": False, "witness": [["a"], ["b"], ["c"]]}
    assert d["orderly"] == {"holds": True}


def test_materialized_succ_s_exhaustive_small():
    """Strict lifting: orderly, qualitative, strict; modular when the order is total."""
    for n in range(4):
        for p in preorders_on(range(n)):
            r = materialize(succ_s, p)
            assert is_orderly(r) and is_qualitative(r) and is_strict_partial_order(r)
            # orderly and qualitative, hence transitive with the union property
            assert is_transitive(r) and has_union_property(r)
            if all(p.geq(u, v) or p.geq(v, u) for u in range(n) for v in range(n)):
                assert is_modular(r)


def test_qualitative_on_all_strict_orders_four_worlds():
    for s in strict_orders_on(range(4)):
        r = materialize(succ_s, s.reflexive_closure())
        assert is_qualitative(r)


def test_geq_s_is_orderly_preorder():
    for p in preorders_on(range(3)):
        r = materialize(geq_s, p)
        rep = audit(r)
        assert rep["orderly"].holds and rep["preorder"].holds


def test_modular_union_gives_qualitative():
    for n in range(5):
        for p in total_preorders_on(range(n)):
            r = materialize(succ_s, p)
            if is_strict_partial_order(r) and is_modular(r) and has_union_property(r):
                assert is_qualitative(r)


def _random_relation(rng, n_atoms):
    alg = FiniteAlgebra.powerset("xyz"[:n_atoms])
    m = np.array([[rng.random() < 0.3 for _ in range(alg.size)] for _ in range(alg.size)])
    return SetRelation(alg, m)


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_witnesses_refute_on_random_relations(seed, n):
    r = _random_relation(random.Random(seed), n)
    assert_self_consistent(r)


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_checks_match_definitions_on_random_relations(seed, n):
    """Compare the matrix checks with direct quantifier scans."""
    r = _random_relation(random.Random(seed), n)
    R, N = r.matrix, len(r.matrix)
    rng = range(N)
    assert is_transitive(r) == all(R[a, c] or not (R[a, b] and R[b, c]) for a in rng for b in rng for c in rng)
    assert is_orderly(r) == all(
        R[u2, v2] for u in rng for v in rng if R[u, v] for u2 in rng if u2 & u == u for v2 in rng if v2 & v == v2
    )
    assert has_union_property(r) == all(
        R[a, b | c] for a in rng for b in rng for c in rng if R[a, b] and R[a, c]
    )
    assert is_qualitative(r) == all(
        R[a, b | c] for a in rng for b in rng for c in rng if R[a | b, c] and R[a | c, b]
    )
    assert is_modular(r) == all(R[c, b] or R[a, c] for a in rng for b in rng if R[a, b] for c in rng)


@given(st.integers(0, 2**32 - 1))
def test_orderly_qualitative_gives_transitive_union(seed):
    r = _random_relation(random.Random(seed), 2)
    if is_orderly(r) and is_qualitative(r):
        assert is_transitive(r) and has_union_property(r)


def test_orderly_qualitative_exhaustive_two_atoms():
    # all orderly relations on the four-member algebra of two atoms
    alg = FiniteAlgebra.powerset("xy")
    found = 0
    for bits in range(1 << 16):
        m = np.array([bits >> i & 1 for i in range(16)], dtype=bool).reshape(4, 4)
        r = SetRelation(alg, m)
        if is_orderly(r) and is_qualitative(r):
            found += 1
            assert is_transitive(r) and has_union_property(r)
    assert found > 0


def test_relation_file_round_trip():
    r = three_element()
    assert parse_relation_file(format_relation_file(r)) == r
    rng = random.Random(3)
    for _ in range(20):
        r = _random_relation(rng, 3)
        assert parse_relation_file(format_relation_file(r)) == r


def test_relation_file_powerset_family():
    text = "ground: a b\nfamily: powerset\npair: 3 0  # {a,b} over the empty set\n"
    r = parse_relation_file(text)
    assert r.pairs == frozenset({(fs("ab"), fs())})


@pytest.mark.parametrize(
    "text",
    [
        "set: a\n",
        "ground: a\nfamily: powerset\nset: a\n",
        "ground: a\nfamily: powerset\npair: 0 9\n",
        "ground: a\nfamily: powerset\npair: x y\n",
        "ground: a\nfamily: everything\n",
        "ground: a\nbogus: 1\n",
        "ground: a\nno colon here\n",
    ],
)
def test_relation_file_errors(text):
    with pytest.raises((InvalidRelation, InvalidAlgebra)):
        parse_relation_file(text)


def test_algebra_constructors():
    g = FiniteAlgebra.generated("abc", ["a"])
    assert set(g.atoms) == {fs("a"), fs("bc")}
    assert g.size == 4 and fs("bc") in g.members()
    with pytest.raises(InvalidAlgebra):
        g.mask_of("b")
    fam = FiniteAlgebra.from_family("abc", [(), "a", "bc", "abc"])
    assert fam == g
    with pytest.raises(InvalidAlgebra):
        FiniteAlgebra.from_family("abc", [(), "a", "abc"])
    with pytest.raises(InvalidAlgebra):
        FiniteAlgebra.from_atoms(["ab", "bc"])
    with pytest.raises(ResourceLimit):
        FiniteAlgebra.powerset(range(9))
    assert FiniteAlgebra.powerset(range(9), max_atoms=9).size == 512


def test_materialize_over_coarser_algebra():
    p = Preorder.chain("a", "b", "c")
    alg = FiniteAlgebra.from_atoms(["a", "bc"])
    r = materialize(succ_s, p, alg)
    assert r.pairs == {
        (fs("a"), fs()),
        (fs("bc"), fs()),
        (fs("abc"), fs()),
        (fs("a"), fs("bc")),
        (fs("abc"), fs("bc")),
    }


@given(st.integers(0, 2**32 - 1))
def test_random_preorder_geq_s_reflexive(seed):
    p = random_preorder(range(4), random.Random(seed))
    assert audit(materialize(geq_s, p))["reflexive"].holds
