import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsplab.errors import DomainError, InstanceError, NotASubgroupError
from hsplab.groups import parse_group
from hsplab.harness import abelian_family, load_group, nonabelian_family
from hsplab.oracle import make_hiding_oracle, make_quotient_oracle, query, query_count, reset
from hsplab.subgroups import enumerate_subgroups, generated_subgroup

from conftest import brute_left_cosets


def test_labels_examples():
    Z4 = parse_group("Z4")
    f = make_hiding_oracle(Z4, [0, 2])
    assert [f.query(g) for g in range(4)] == [0, 1, 0, 1]
    inj = make_hiding_oracle(Z4)
    assert [inj.query(g) for g in range(4)] == [0, 1, 2, 3]
    Z8 = parse_group("Z8")
    f8 = make_hiding_oracle(Z8, generated_subgroup(Z8, [4]))
    assert {f8.query(g) for g in range(8)} == {0, 1, 2, 3}


def test_counting_and_transcript():
    Z4 = parse_group("Z4")
    f = make_hiding_oracle(Z4, [0, 2])
    assert query(f, 2) == 0
    query(f, 2)
    assert query_count(f) == 2
    assert json.loads(f.transcript_json()) == [{"element": 2, "label": 0}, {"element": 2, "label": 0}]
    reset(f)
    assert query_count(f) == 0 and f.transcript == []


def test_foreign_element_and_bad_subgroup():
    Z4 = parse_group("Z4")
    f = make_hiding_oracle(Z4)
    with pytest.raises(DomainError):
        f.query(4)
    with pytest.raises(DomainError):
        f.query(True)
    with pytest.raises(NotASubgroupError):
        make_hiding_oracle(Z4, [0, 1])


def test_dedupe_never_recounts():
    G = parse_group("Z6")
    f = make_hiding_oracle(G, [0, 3], dedupe=True)
    for g in [1, 1, 4, 1, 4]:
        f.query(g)
    assert f.count == 2
    assert [g for g, _ in f.transcript] == [1, 4]


def test_hiding_property_small_against_brute_force():
    for spec in abelian_family(24) + ["S3", "D4", "Q8", "A4", "D6", "S4"]:
        G = parse_group(spec)
        for H in enumerate_subgroups(G):
            f = make_hiding_oracle(G, H)
            classes = {}
            for g in range(G.order):
                classes.setdefault(f.query(g), set()).add(g)
            assert {frozenset(c) for c in classes.values()} == brute_left_cosets(G, H.elements), (spec, H)


@pytest.mark.slow
def test_hiding_property_exhaustive_to_128():
    # constant on every gH and exactly n/m distinct labels, for all (G, H) with n <= 128
    for spec in abelian_family(128) + nonabelian_family(128) + ["D4xZ2", "Q8xZ2", "S3xZ3"]:
        G = load_group(spec)
        T = G.table
        for H in enumerate_subgroups(G):
            f = make_hiding_oracle(G, H)
            lab = np.array([f.query(g) for g in range(G.order)])
            assert (lab[T[:, H.array]] == lab[:, None]).all(), (spec, H)
            assert len(np.unique(lab)) == G.order // H.order, (spec, H)


def test_quotient_oracle_example():
    Z8 = parse_group("Z8")
    base = make_hiding_oracle(Z8, generated_subgroup(Z8, [2]))
    qo = make_quotient_oracle(base, generated_subgroup(Z8, [4]))
    assert qo.group.order == 4
    assert qo.hidden_subgroup.order == 2
    qo.query(1)
    assert base.count == 1 and qo.count == 1
    labels = [qo.query(q) for q in range(4)]
    # hides the image of <2>, which is the index-2 subgroup of Z8/<4>
    assert len(set(labels)) == 2


def test_quotient_oracle_trivial_is_base():
    G = parse_group("Z6")
    base = make_hiding_oracle(G, [0, 3])
    qo = make_quotient_oracle(base, [0])
    assert qo.group is G
    assert [qo.query(g) for g in range(6)] == [make_hiding_oracle(G, [0, 3]).query(g) for g in range(6)]


def test_quotient_oracle_requires_containment():
    Z8 = parse_group("Z8")
    base = make_hiding_oracle(Z8, generated_subgroup(Z8, [4]))
    with pytest.raises(InstanceError):
        make_quotient_oracle(base, generated_subgroup(Z8, [2]))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z12", "Z2xZ4", "Z3xZ6", "Z2^4"]), st.data())
def test_quotient_oracle_consistent(spec, data):
    G = parse_group(spec)
    subs = enumerate_subgroups(G)
    H = data.draw(st.sampled_from(subs))
    H1 = data.draw(st.sampled_from([K for K in subs if K.elementset <= H.elementset]))
    base = make_hiding_oracle(G, H)
    qo = make_quotient_oracle(base, H1)
    ref = make_hiding_oracle(G, H)
    for q in range(qo.group.order):
        g = qo.representative(q)
        # equal labels in the quotient iff equal labels in G
        assert qo.query(q) == ref.query(g)
    assert base.count == qo.group.order
