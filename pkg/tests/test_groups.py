import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsplab.errors import CapacityError, CatalogError, DomainError, NotAGroupError, ParseError
from hsplab.groups import (
    check_axioms,
    direct_product,
    format_cycles,
    make_abelian_product,
    make_builtin,
    make_cayley,
    parse_cycles,
    parse_group,
    read_cayley_file,
    write_cayley_file,
)

from conftest import brute_mul

SMALL = ["Z8", "Z4xZ2", "Z2^3", "Z6", "D4", "Q8", "S3", "A4", "D6", "S4", "D4xZ2", "Z3xS3"]


@pytest.mark.parametrize(
    "spec,order,abelian",
    [("Z8", 8, True), ("Z4xZ2", 8, True), ("Z2^3", 8, True), ("D6", 12, False), ("S4", 24, False),
     ("A4", 12, False), ("A5", 60, False), ("Q8", 8, False), ("D4xZ2", 16, False), ("Z2xZ3", 6, True)],
)
def test_parse_orders(spec, order, abelian):
    G = parse_group(spec)
    assert G.order == order
    assert G.is_abelian == abelian
    assert G.identity == 0


def test_mixed_radix_encoding():
    G = make_abelian_product([2, 2])
    assert G.encode((1, 1)) == 3
    assert G.digits(2) == (1, 0)


def test_z2_times_z3_is_cyclic():
    G = make_abelian_product([2, 3])
    assert max(G.element_order(a) for a in G.elements()) == 6


@pytest.mark.parametrize("spec", SMALL)
def test_axioms_against_independent_multiplication(spec):
    G = parse_group(spec)
    mul = brute_mul(G)
    n = G.order
    for a in range(n):
        for b in range(n):
            assert G.compose(a, b) == mul(a, b)
        assert G.compose(a, G.invert(a)) == 0
        assert G.compose(G.invert(a), a) == 0
    check_axioms(G)


def test_permutation_composition_is_right_to_left():
    S3 = parse_group("S3")
    a = S3.parse_element("perm:(1 2)")
    b = S3.parse_element("perm:(2 3)")
    assert S3.format_element(S3.compose(a, b)) == "(1 2 3)"
    assert S3.format_element(S3.compose(b, a)) == "(1 3 2)"


def test_cycle_round_trip():
    p = parse_cycles("(1 3)(2 4 5)", 5)
    assert format_cycles(p) == "(1 3)(2 4 5)"
    assert format_cycles(parse_cycles("()", 4)) == "()"


def test_builtin_catalog():
    assert make_builtin("alternating", 4).order == 12
    assert make_builtin("symmetric", 4).order == 24
    D4 = make_builtin("dihedral", 4)
    assert D4.order == 8 and not D4.is_abelian
    with pytest.raises(CatalogError):
        make_builtin("dihedral", 2)
    with pytest.raises(CatalogError):
        make_builtin("quaternion", 16)
    with pytest.raises(CatalogError):
        make_builtin("symmetric", 8)


def test_direct_product():
    assert direct_product(parse_group("Z2"), parse_group("Z3")).order == 6
    P = direct_product(parse_group("D4"), parse_group("Z2"))
    assert P.order == 16 and not P.is_abelian
    with pytest.raises(CapacityError):
        direct_product(parse_group("S5"), parse_group("S5"), order_cap=5040)


@pytest.mark.parametrize("bad", ["", "Z1", "X4", "Z2^", "D4^2", "Zx"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_group(bad)


def test_foreign_element_rejected():
    G = parse_group("Z4")
    with pytest.raises(DomainError):
        G.compose(0, 4)
    with pytest.raises(DomainError):
        G.invert(-1)


def test_cayley_trivial_and_z3():
    T = make_cayley([[0]])
    assert T.order == 1
    Z3 = make_cayley([[(i + j) % 3 for j in range(3)] for i in range(3)])
    assert Z3.is_abelian


def test_cayley_latin_violation():
    with pytest.raises(NotAGroupError) as ei:
        make_cayley([[0, 1], [1, 1]])
    assert ei.value.axiom == "latin-square"


def test_cayley_associativity_violation():
    loop = [[0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0]]
    with pytest.raises(NotAGroupError) as ei:
        make_cayley(loop)
    assert ei.value.axiom == "associativity"
    a, b, c = ei.value.witness
    t = np.array(loop)
    assert t[t[a, b], c] != t[a, t[b, c]]


def test_cayley_identity_moved_to_zero():
    # Z3 with the identity stored at position 1
    perm = [2, 0, 1]  # position -> residue
    inv = {r: i for i, r in enumerate(perm)}
    table = [[inv[(perm[i] + perm[j]) % 3] for j in range(3)] for i in range(3)]
    G = make_cayley(table)
    assert G.identity == 0
    assert G.labels[0] == 1
    check_axioms(G)


def test_cayley_file_round_trip(tmp_path):
    G = parse_group("S3")
    path = tmp_path / "s3.txt"
    write_cayley_file(G, path)
    H = read_cayley_file(path)
    assert H.order == 6 and not H.is_abelian
    assert parse_group(f"cayley:{path}").order == 6


def test_table_capacity():
    with pytest.raises(CapacityError):
        parse_group("S7").table
    S7 = parse_group("S7")
    a = S7.parse_element("perm:(1 2 3 4 5 6 7)")
    assert S7.element_order(a) == 7


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_random_triples_associate(spec, data):
    G = parse_group(spec)
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert G.compose(G.compose(a, b), c) == G.compose(a, G.compose(b, c))
    assert G.power(a, G.element_order(a)) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=3))
def test_abelian_products_commute(moduli):
    G = make_abelian_product(moduli)
    assert G.order == int(np.prod(moduli))
    for a, b in itertools.islice(itertools.product(range(G.order), repeat=2), 400):
        assert G.compose(a, b) == G.compose(b, a)
