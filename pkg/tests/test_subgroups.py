import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsplab.errors import CapacityError, DomainError, InvalidDivisorError, NormalityError, NotASubgroupError, UnsupportedGroupError
from hsplab.groups import make_abelian_product, parse_group
from hsplab.subgroups import (
    abelian_basis,
    coset_representatives,
    embed_all,
    enumerate_subgroups,
    generated_subgroup,
    intersection,
    is_normal,
    join,
    left_cosets,
    make_subgroup,
    quotient_group,
    right_cosets,
    set_product,
    subgroup_as_group,
    subgroup_of_order,
    trivial_subgroup,
)

from conftest import brute_closure, brute_left_cosets, brute_mul, brute_subgroups

BRUTE = ["Z4", "Z6", "Z8", "Z2^3", "Z4xZ2", "Z9", "Z3xZ3", "Z10", "Z12", "Z2xZ6",
         "S3", "D4", "Q8", "A4", "D5", "D6"]


@pytest.mark.parametrize("spec", BRUTE)
def test_enumeration_matches_brute_force(spec):
    G = parse_group(spec)
    ours = {H.elementset for H in enumerate_subgroups(G)}
    assert ours == brute_subgroups(G)


@pytest.mark.parametrize(
    "spec,count",
    # counts from the lattice formulas: Gaussian binomials for Z2^k, and the
    # standard tables for the small symmetric and alternating groups
    [("Z2^4", 67), ("Z2^5", 374), ("Z3^3", 28), ("S4", 30), ("A5", 59), ("S5", 156), ("Z4", 3), ("S3", 6)],
)
def test_subgroup_counts(spec, count):
    assert len(enumerate_subgroups(parse_group(spec))) == count


def test_a4_has_no_subgroup_of_order_six():
    orders = {H.order for H in enumerate_subgroups(parse_group("A4"))}
    assert orders == {1, 2, 3, 4, 12}


def test_enumeration_cap():
    with pytest.raises(CapacityError):
        enumerate_subgroups(parse_group("S6"))


def test_enumeration_sorted_and_closed():
    G = parse_group("D6")
    subs = enumerate_subgroups(G)
    keys = [(H.order, H.elements) for H in subs]
    assert keys == sorted(keys)
    for H in subs:
        assert brute_closure(G, H.generators) == H.elementset


def test_generated_subgroup_examples():
    Z8 = parse_group("Z8")
    assert generated_subgroup(Z8, [2]).elements == (0, 2, 4, 6)
    assert generated_subgroup(Z8, []).elements == (0,)
    S4 = parse_group("S4")
    H = generated_subgroup(S4, [S4.parse_element("perm:(1 2 3 4)")])
    assert H.order == 4
    assert H.elementset == brute_closure(S4, [S4.parse_element("perm:(1 2 3 4)")])


def test_make_subgroup_validates():
    G = parse_group("Z6")
    with pytest.raises(NotASubgroupError):
        make_subgroup(G, [0, 1])
    with pytest.raises(DomainError):
        make_subgroup(G, [0, 9])


@pytest.mark.parametrize("spec", ["Z12", "Z2xZ4", "Z2^3", "Z3xZ9", "Z4xZ2xZ3", "Z5xZ5"])
def test_subgroup_of_order_every_divisor(spec):
    G = parse_group(spec)
    n = G.order
    for d in range(1, n + 1):
        if n % d:
            with pytest.raises(InvalidDivisorError):
                subgroup_of_order(G, d)
            continue
        H = subgroup_of_order(G, d)
        assert H.order == d
        assert brute_closure(G, H.generators) == H.elementset


def test_subgroup_of_order_examples():
    Z12 = parse_group("Z12")
    assert subgroup_of_order(Z12, 6).elements == (0, 2, 4, 6, 8, 10)
    assert subgroup_of_order(Z12, 1).is_trivial
    with pytest.raises(UnsupportedGroupError):
        subgroup_of_order(parse_group("S3"), 3)


def test_left_cosets_examples():
    Z4 = parse_group("Z4")
    part = left_cosets(Z4, [0, 2])
    assert part.rep == (0, 1, 0, 1)
    assert part.count == 2
    assert left_cosets(Z4, [0, 1, 2, 3]).count == 1
    D4 = parse_group("D4")
    rot = next(H for H in enumerate_subgroups(D4) if H.order == 4 and
               all(D4.element_order(g) in (1, 2, 4) for g in H.elements) and
               any(D4.element_order(g) == 4 for g in H.elements))
    assert left_cosets(D4, rot).count == 2


@pytest.mark.parametrize("spec", ["S3", "D4", "A4", "Q8", "Z2xZ6"])
def test_cosets_match_brute_force(spec):
    G = parse_group(spec)
    for H in enumerate_subgroups(G):
        part = left_cosets(G, H)
        ours = {frozenset(c) for c in part.cosets().values()}
        assert ours == brute_left_cosets(G, H.elements)
        assert all(part.rep[g] == min(c) for c in ours for g in c)


def test_left_and_right_cosets_differ_for_non_normal():
    S3 = parse_group("S3")
    H = generated_subgroup(S3, [S3.parse_element("perm:(1 2)")])
    assert not is_normal(S3, H)
    lefts = {frozenset(c) for c in left_cosets(S3, H).cosets().values()}
    rights = {frozenset(c) for c in right_cosets(S3, H).cosets().values()}
    assert lefts != rights
    assert len(coset_representatives(S3, H, side="right")) == 3


def test_quotient_examples():
    Z8 = parse_group("Z8")
    Q, proj = quotient_group(Z8, [0, 4])
    assert Q.order == 4
    assert sorted(Q.element_orders()) == [1, 2, 4, 4]
    assert proj[4] == 0 and proj[5] == proj[1]
    V = parse_group("Z2xZ2")
    Q2, _ = quotient_group(V, generated_subgroup(V, [V.encode((1, 1))]))
    assert Q2.order == 2


def test_quotient_is_a_homomorphic_image():
    G = parse_group("Z4xZ6")
    mul = brute_mul(G)
    for H in enumerate_subgroups(G):
        Q, proj = quotient_group(G, H)
        for a in range(0, G.order, 5):
            for b in range(0, G.order, 7):
                assert Q.compose(proj[a], proj[b]) == proj[mul(a, b)]


def test_quotient_rejects_non_normal():
    S3 = parse_group("S3")
    H = generated_subgroup(S3, [S3.parse_element("perm:(1 2)")])
    with pytest.raises(NormalityError) as ei:
        quotient_group(S3, H)
    g, h = ei.value.witness
    assert S3.compose(S3.compose(g, h), S3.invert(g)) not in H.elementset


def test_set_product_and_intersection():
    Z5 = parse_group("Z5")
    assert set_product(Z5, {0, 1}, {0, 2}) == {0, 1, 2, 3}
    Z12 = parse_group("Z12")
    A = generated_subgroup(Z12, [2])
    B = generated_subgroup(Z12, [3])
    assert intersection(A, B).elements == (0, 6)
    assert join(A, B).order == 12
    with pytest.raises(DomainError):
        intersection(A, trivial_subgroup(parse_group("Z12")))


@pytest.mark.parametrize("spec", ["Z12", "Z2xZ4xZ3", "Z8xZ2", "Z3xZ9"])
def test_abelian_basis_on_cayley_copies(spec):
    G = parse_group(spec)
    # a Cayley-table copy forces the decomposition path
    C = subgroup_as_group(G, generated_subgroup(G, range(G.order)))
    for Gr in (G, C):
        basis = abelian_basis(Gr)
        orders = [q for _, q in basis]
        assert all(Gr.element_order(g) == q for g, q in basis)
        assert len(embed_all(Gr, basis)) == Gr.order
        assert sorted(orders) == sorted(q for _, q in abelian_basis(G))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 5, 8, 9]), min_size=1, max_size=3), st.data())
def test_subgroup_of_order_property(moduli, data):
    G = make_abelian_product(moduli)
    divs = [d for d in range(1, G.order + 1) if G.order % d == 0]
    d = data.draw(st.sampled_from(divs))
    H = subgroup_of_order(G, d)
    assert H.order == d
    mul = brute_mul(G)
    S = H.elementset
    assert all(mul(a, b) in S for a in S for b in S)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S4", "D6", "Q8", "A4", "Z4xZ6"]), st.data())
def test_generated_subgroup_property(spec, data):
    G = parse_group(spec)
    seeds = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    H = generated_subgroup(G, seeds)
    assert H.elementset == brute_closure(G, seeds)
    assert G.order % H.order == 0
    assert brute_closure(G, H.generators) == H.elementset
