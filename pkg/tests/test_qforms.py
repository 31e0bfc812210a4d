import math
from functools import reduce as fold

import pytest
from hypothesis import given, strategies as st

from rqlab.arith import is_squarefree
from rqlab.pell import fundamental_unit
from rqlab.qforms import (
    GaussForm,
    ambiguous_forms,
    class_group,
    compose,
    cycle,
    equivalent,
    generic_characters,
    genus_character_labels,
    in_principal_genus,
    narrow_two_rank,
    principal_form,
    redei_four_rank,
    redei_matrix,
    reduce,
    represents_by_principal,
    two_sylow,
)
from rqlab.suites import principal_represents_oracle

# class numbers of Q(sqrt d) for d = 2, 3 mod 4, where Z[sqrt d] is the maximal order
CLASS_NUMBERS = {
    2: 1, 3: 1, 6: 1, 7: 1, 10: 2, 11: 1, 14: 1, 15: 2, 19: 1, 22: 1, 23: 1, 26: 2,
    30: 2, 31: 1, 34: 2, 35: 2, 79: 3, 82: 4, 130: 4, 142: 3, 223: 3, 226: 8,
}

SQUAREFREE = [D for D in range(2, 400) if is_squarefree(D)]


@pytest.mark.parametrize("D", sorted(CLASS_NUMBERS))
def test_class_number_table(D):
    narrow = class_group(D).order
    h = narrow if fundamental_unit(D).norm == -1 else narrow // 2
    assert h == CLASS_NUMBERS[D]


def test_two_sylow_structures():
    expect = {
        15: ((2, 2), (2,)),
        65: ((2,), (2,)),
        221: ((4,), (2,)),
        442: ((4, 2), (4, 2)),
        170: ((2, 2), (2, 2)),
        34: ((4,), (2,)),
    }
    for D, (narrow, ordinary) in expect.items():
        t = two_sylow(D)
        assert (t.narrow, t.ordinary) == (narrow, ordinary), D
    assert two_sylow(226).narrow == (8,)
    assert two_sylow(1155).narrow == (2, 2, 2, 2)


def test_reduced_forms_and_cycles():
    for D in (15, 79, 221, 442):
        for cyc in class_group(D).cycles:
            for f in cyc:
                s = math.sqrt(D)
                assert f.is_reduced() and f.det == D and f.is_primitive()
                assert 0 < f.b < s and s - f.b < abs(f.a) < s + f.b
    assert cycle(principal_form(442))[0].a in (1, -1, 21)


def _random_equivalent(f, moves):
    # apply generators of SL2(Z): S and T^k
    for k in moves:
        a, b, c = f.a, f.b, f.c
        if k == 0:
            f = GaussForm(c, -b, a)
        else:
            f = GaussForm(a, b + k * a, a * k * k + 2 * b * k + c)
    return f


forms = st.tuples(
    st.sampled_from([D for D in SQUAREFREE if D > 6]),
    st.integers(0, 10**6),
    st.lists(st.integers(-3, 3), min_size=1, max_size=6),
)


@given(forms)
def test_genus_characters_well_defined(data):
    D, pick, moves = data
    G = class_group(D)
    f = G.rep(pick % G.order)
    g = _random_equivalent(f, moves)
    assert equivalent(f, g)
    chi = generic_characters(f).values
    assert generic_characters(f, skip=3).values == chi
    assert generic_characters(g).values == chi


@given(st.sampled_from([D for D in SQUAREFREE if D > 6]), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_class_group_axioms(D, i, j, k):
    G = class_group(D)
    i, j, k = i % G.order, j % G.order, k % G.order
    e = G.identity
    assert G.mul(i, e) == i
    assert G.mul(G.mul(i, j), k) == G.mul(i, G.mul(j, k))
    assert G.class_of(G.rep(i).inverse()) == next(x for x in range(G.order) if G.mul(i, x) == e)
    assert G.order % G.element_order(i) == 0


def test_compose_respects_characters():
    # characters are homomorphisms on the class group
    for D in (221, 442, 1155):
        G = class_group(D)
        for i in range(min(G.order, 12)):
            for j in range(min(G.order, 12)):
                a = generic_characters(G.rep(i)).values
                b = generic_characters(G.rep(j)).values
                c = generic_characters(compose(G.rep(i), G.rep(j))).values
                assert c == tuple(x * y for x, y in zip(a, b))


def test_ambiguous_forms_count():
    # 2^(t-1) ambiguous classes in the narrow group, t = number of prime discriminants
    for D in SQUAREFREE[:150]:
        G = class_group(D)
        amb = {G.class_of(f) for f in ambiguous_forms(D)}
        two_torsion = [x for x in range(G.order) if G.mul(x, x) == G.identity]
        assert amb == set(two_torsion), D
        assert len(two_torsion) == 2 ** narrow_two_rank(D)


def test_genus_labels():
    assert genus_character_labels(15) == ["({m}/3)", "({m}/5)", "delta"]
    assert genus_character_labels(442) == ["({m}/13)", "({m}/17)", "epsilon"]
    assert genus_character_labels(34) == ["({m}/17)", "epsilon"]


def test_principal_genus_is_squares():
    for D in (15, 221, 442, 1155, 3315):
        G = class_group(D)
        squares = {G.mul(x, x) for x in range(G.order)}
        gen = {x for x in range(G.order) if in_principal_genus(G.rep(x))}
        assert squares == gen, D


def test_redei_small():
    assert redei_four_rank(221) == 1 and redei_four_rank(15) == 0
    assert len(redei_matrix(1155)) > 0
    for D in SQUAREFREE:
        assert redei_four_rank(D) == two_sylow(D).four_rank, D


def test_represents_by_principal_vs_continued_fraction():
    for D in SQUAREFREE:
        if math.isqrt(D) ** 2 == D:
            continue
        ms = [m for m in range(-math.isqrt(D), math.isqrt(D) + 1) if m and m * m < D]
        for m in ms:
            assert represents_by_principal(D, m) == principal_represents_oracle(D, m), (D, m)


def test_reduce_rejects_degenerate():
    with pytest.raises(ValueError):
        reduce(GaussForm(0, 1, 5))
    with pytest.raises(ValueError):
        class_group(16)


def test_compose_identity():
    for D in (79, 221):
        G = class_group(D)
        for i in range(G.order):
            assert equivalent(compose(G.rep(i), principal_form(D)), G.rep(i))
        prod = fold(lambda a, b: G.mul(a, b), range(G.order), G.identity)
        assert prod in range(G.order)
