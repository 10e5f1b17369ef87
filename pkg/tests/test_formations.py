import pytest
from conftest import SMALL_LABELS, one_subgroup
from hypothesis import given
from hypothesis import strategies as st

from formhyp.catalog import builtin_catalog, get_group
from formhyp.formations import (
    Nilpotent,
    Partition,
    PiGroups,
    SigmaNilpotent,
    SpecError,
    Supersoluble,
    VStar,
    WBar,
    ZClosure,
    formation_membership,
    hypercenter,
    hypercenter_oracle,
    int_f,
    is_f_central,
    parse_formation,
    subgroup_in,
)
from formhyp.groups import (
    GroupError,
    OrderCapExceeded,
    is_normal,
    join,
    quotient,
    subgroup_as_group,
)
from formhyp.harness import chief_factor_pairs
from formhyp.lattice import all_subgroups

S23 = Partition.parse("2,3")
N, U, NS = Nilpotent(), Supersoluble(), SigmaNilpotent(S23)


def test_partition_grammar():
    p = Partition.parse("2,3|5,7;rest=oneblock")
    assert p.same_block([2, 3]) and p.same_block([5, 7]) and not p.same_block([3, 5])
    assert p.same_block([11, 13]) and not p.same_block([2, 11])
    s = Partition.parse("2,3")
    assert not s.same_block([11, 13]) and str(s) == "2,3"
    assert Partition.parse("singletons").same_block([5])
    assert Partition.parse("rest=oneblock").same_block([2, 97])
    assert [sorted(b) for b in p.blocks_meeting({2, 5, 11})] == [[2], [5], [11]]
    for bad in ["2,4", "2,3|3,5", "2,,3", "2;rest=sometimes", "x"]:
        with pytest.raises(SpecError):
            Partition.parse(bad)


@pytest.mark.parametrize(
    "text", ["nilpotent", "supersoluble", "nsigma:2,3|5,7", "pigroups:2,3", "wbar(supersoluble)", "z(vstar(nilpotent))"]
)
def test_formation_spec_roundtrip(text):
    assert str(parse_formation(text)) == text


@pytest.mark.parametrize("bad", ["", "abelian", "pigroups:4", "wbar(nilpotent", "nsigma:2,2"])
def test_formation_spec_errors(bad):
    with pytest.raises(SpecError):
        parse_formation(bad)


def test_membership_examples():
    assert formation_membership(N, get_group("Q8"))
    assert formation_membership(NS, get_group("S3"))
    assert not formation_membership(U, get_group("A4"))
    T = get_group("T294")
    assert formation_membership(WBar(U), T) and not formation_membership(U, T)
    assert formation_membership(PiGroups(frozenset({2, 3})), get_group("S4"))
    assert not formation_membership(PiGroups(frozenset({2, 3})), get_group("A5"))


def test_centrality_examples():
    S3 = get_group("S3")
    A3 = one_subgroup(S3, 3)
    assert not is_f_central(N, S3, A3, S3.trivial)
    assert is_f_central(NS, S3, A3, S3.trivial)
    C6 = get_group("C6")
    assert is_f_central(N, C6, one_subgroup(C6, 2), C6.trivial)
    with pytest.raises(GroupError):
        is_f_central(N, S3, S3.whole, S3.trivial)


def test_hypercenter_examples():
    assert hypercenter(N, get_group("S3")).is_trivial()
    for label in ["Q8", "C12", "D16", "C2^3"]:
        assert hypercenter(N, get_group(label)).is_whole()
    assert hypercenter(U, get_group("T294")).is_trivial()
    assert hypercenter(NS, get_group("S4")).is_whole()


def test_int_f_examples():
    assert int_f(N, get_group("S3")).is_trivial()
    assert int_f(N, get_group("D16")).is_whole()
    assert int_f(U, get_group("S4")).is_trivial()


def test_section_cap_is_reported(monkeypatch):
    A5 = get_group("A5xC2")
    A5.cache.clear()  # sections built by earlier tests would bypass the cap
    monkeypatch.setenv("FORMHYP_SECTION_CAP", "100")
    X = one_subgroup(A5, 60, is_normal)
    with pytest.raises(OrderCapExceeded):
        is_f_central(U, A5, X, A5.trivial, route="generic")


# -- properties ---------------------------------------------------------------

FORMATIONS = [N, U, NS, SigmaNilpotent(Partition.parse("2,5|3,7")), PiGroups(frozenset({2, 3}))]
MEDIUM = [G.label for G in builtin_catalog().tier("medium")]
PROPERTY_LABELS = [G.label for G in builtin_catalog().tier(48)]


@given(st.sampled_from(MEDIUM), st.sampled_from(FORMATIONS[:4]))
def test_fast_and_generic_centrality_agree(label, F):
    G = get_group(label)
    for H, K in chief_factor_pairs(G):
        assert is_f_central(F, G, H, K, route="fast") == is_f_central(F, G, H, K, route="generic")


@given(st.sampled_from(SMALL_LABELS), st.sampled_from(FORMATIONS))
def test_hypercenter_matches_oracle(label, F):
    G = get_group(label)
    assert hypercenter(F, G) == hypercenter_oracle(F, G)


@given(st.sampled_from(PROPERTY_LABELS), st.sampled_from(FORMATIONS))
def test_z_closure_hypercenter(label, F):
    G = get_group(label)
    assert hypercenter(ZClosure(F), G) == hypercenter(F, G)


@given(st.sampled_from(PROPERTY_LABELS), st.sampled_from(FORMATIONS), st.data())
def test_hypercenter_restricts_to_subgroups(label, F, data):
    from formhyp.groups import image_in

    G = get_group(label)
    H = data.draw(st.sampled_from(all_subgroups(G).subgroups))
    S, emb = subgroup_as_group(H)
    assert (hypercenter(F, G) & H) <= image_in(G, S, emb, hypercenter(F, S))


@given(st.sampled_from(PROPERTY_LABELS), st.sampled_from(FORMATIONS))
def test_hypercenter_idempotent(label, F):
    G = get_group(label)
    Z = hypercenter(F, G)
    S, _ = subgroup_as_group(Z)
    assert hypercenter(F, S).order == Z.order


@given(st.sampled_from(PROPERTY_LABELS), st.sampled_from([N, U, NS]), st.data())
def test_hypercenter_joins_f_subgroups(label, F, data):
    G = get_group(label)
    Z = hypercenter(F, G)
    assert Z <= int_f(F, G)
    fsubs = [H for H in all_subgroups(G) if subgroup_in(F, H)]
    H = data.draw(st.sampled_from(fsubs))
    assert subgroup_in(F, join(H, Z))


@given(st.sampled_from(PROPERTY_LABELS))
def test_baer_int_equals_hypercenter(label):
    G = get_group(label)
    assert int_f(N, G) == hypercenter(N, G)


@given(st.sampled_from(PROPERTY_LABELS), st.sampled_from([N, U, NS]), st.data())
def test_wbar_vstar_closure(label, F, data):
    G = get_group(label)
    W, V = WBar(F), VStar(F)
    w, v = formation_membership(W, G), formation_membership(V, G)
    if formation_membership(N, G) or formation_membership(F, G):
        assert w
    if w:
        assert v
    H = data.draw(st.sampled_from(all_subgroups(G).subgroups))
    M = data.draw(st.sampled_from(all_subgroups(G).normal))
    Q = quotient(G, M).group
    for X, member in ((W, w), (V, v)):
        if member:
            assert subgroup_in(X, H)
            assert formation_membership(X, Q)


@given(st.sampled_from(PROPERTY_LABELS), st.sampled_from(FORMATIONS), st.data())
def test_membership_is_subgroup_and_quotient_closed(label, F, data):
    G = get_group(label)
    if not formation_membership(F, G):
        return
    H = data.draw(st.sampled_from(all_subgroups(G).subgroups))
    M = data.draw(st.sampled_from(all_subgroups(G).normal))
    assert subgroup_in(F, H)
    assert formation_membership(F, quotient(G, M).group)


@given(st.sampled_from(PROPERTY_LABELS))
def test_sigma_nilpotent_singletons_is_nilpotent(label):
    G = get_group(label)
    assert formation_membership(SigmaNilpotent(Partition.parse("singletons")), G) == formation_membership(N, G)
