"""Tests for the graded Lie ring construction and its checks."""

import pytest

from coprime_lab.action import ASubgroupDescriptor, ActionSetup, Automorphism, fixed_subgroup, maximal_subgroups
from coprime_lab.errors import PreconditionError
from coprime_lab.groups import Group, center, group_from_generators
from coprime_lab.lie import (
    LieSubspace,
    axiom_report,
    check_centralizer_transfer,
    check_class_transfer,
    check_span_lemma,
    induced_a_action,
    lie_ring_of,
    lie_series,
    lie_subring_of_subgroup,
    ring_to_json,
    with_corrupted_constant,
)
from coprime_lab.perms import Perm
from coprime_lab.series import nilpotency_class
from coprime_lab.status import CheckStatus


def heisenberg27():
    t = Perm.from_cycles(9, (0, 3, 6), (1, 4, 7), (2, 5, 8))
    v = Perm.from_cycles(9, (0, 1, 2), (3, 5, 4))
    return group_from_generators(9, [t, v])


def wreath81():
    t = Perm.from_cycles(9, (0, 3, 6), (1, 4, 7), (2, 5, 8))
    u0 = Perm.from_cycles(9, (0, 1, 2))
    return group_from_generators(9, [t, u0])


def abelian():
    return group_from_generators(6, [Perm.from_cycles(6, (0, 1, 2)), Perm.from_cycles(6, (3, 4, 5))])


def heis_setup(k=2):
    G = heisenberg27()
    t, v = G.generators
    a1 = Automorphism(G, {t: t.inverse(), v: v})
    a2 = Automorphism(G, {t: t, v: v.inverse()})
    basis = [a1, a2] + [Automorphism.identity(G) for _ in range(k - 2)]
    return G, ActionSetup(G, 2, k, basis)


def test_abelian_ring_single_component():
    L = lie_ring_of(abelian())
    assert L.class_ == 1
    assert L.table == {}
    assert all(axiom_report(L).values())


def test_heisenberg_ring_components_and_bracket():
    G = heisenberg27()
    L = lie_ring_of(G)
    assert [L.component_order(w) for w in (1, 2)] == [9, 3]
    # bracket of the two weight-1 basis vectors spans component 2
    e0 = L.basis_unit(1, 0)
    e1 = L.basis_unit(1, 1)
    out = L.bracket(1, e0, 1, e1)
    assert any(out)


def test_wreath_ring_class_three():
    W = wreath81()
    L = lie_ring_of(W)
    assert L.class_ == 3 == nilpotency_class(W)
    assert check_class_transfer(L, W)


def test_non_nilpotent_rejected():
    r = Perm.from_cycles(7, tuple(range(7)))
    s = Perm([(2 * i) % 7 for i in range(7)])
    F = group_from_generators(7, [r, s])
    with pytest.raises(PreconditionError):
        lie_ring_of(F)


def test_lie_series_values():
    L = lie_ring_of(heisenberg27())
    derived = lie_series(L, "derived")
    assert [s.size() for s in derived] == [27, 3, 1]
    W = lie_ring_of(wreath81())
    lower = lie_series(W, "lower-central")
    assert [s.size() for s in lower] == [81, 9, 3, 1]
    # gamma_2(L) covers components 2 and 3 exactly
    gamma2 = lower[1]
    assert len(gamma2.weight_set(1)) == 1
    assert len(gamma2.weight_set(2)) == W.component_order(2)
    assert len(gamma2.weight_set(3)) == W.component_order(3)


def test_subring_of_subgroup():
    G = heisenberg27()
    L = lie_ring_of(G)
    full = lie_subring_of_subgroup(L, G, G)
    assert full.is_full()
    zero = lie_subring_of_subgroup(L, G, Group.trivial(9))
    assert zero.is_zero
    Z = center(G)
    zc = lie_subring_of_subgroup(L, G, Z)
    assert len(zc.weight_set(1)) == 1  # center maps to 0 in weight 1
    assert len(zc.weight_set(2)) == 3  # and covers all of weight 2
    assert zc.bracket_closed


def test_induced_action_and_transfer():
    G, setup = heis_setup()
    L = lie_ring_of(G)
    action = induced_a_action(L, setup)
    for B in maximal_subgroups(setup) + [ASubgroupDescriptor.full(2, 2)]:
        assert check_centralizer_transfer(L, setup, B, action=action)


def test_trivial_action_fixes_everything():
    G = heisenberg27()
    setup = ActionSetup(G, 2, 2, [Automorphism.identity(G)] * 2)
    L = lie_ring_of(G)
    action = induced_a_action(L, setup)
    fixed = action.fixed_subspace(ASubgroupDescriptor.full(2, 2))
    assert fixed.is_full()


def test_inversion_negates_weight_one():
    G = abelian()
    a, b = G.generators
    inv = Automorphism(G, {a: a.inverse(), b: b.inverse()})
    setup = ActionSetup(G, 2, 1, [inv])
    L = lie_ring_of(G)
    action = induced_a_action(L, setup)
    vec = (1, 0)
    out = action.apply((1,), 1, vec)
    assert out == (2, 0)  # negation mod 3


def test_span_lemma_single_full_subspace():
    G, setup = heis_setup()
    L = lie_ring_of(G)
    action = induced_a_action(L, setup)
    out = check_span_lemma(L, setup, [LieSubspace.full(L)], "pairwise", action=action)
    assert out.status is CheckStatus.PASS


def test_span_lemma_centralizer_images():
    G, setup = heis_setup()
    L = lie_ring_of(G)
    action = induced_a_action(L, setup)
    subs = [
        lie_subring_of_subgroup(L, G, fixed_subgroup(setup, A_j))
        for A_j in maximal_subgroups(setup)
    ]
    for mode in ("pairwise", "gamma"):
        out = check_span_lemma(L, setup, subs, mode, action=action)
        assert out.status is CheckStatus.PASS, out.detail


def test_span_lemma_proper_subalgebra_reported():
    G, setup = heis_setup()
    L = lie_ring_of(G)
    action = induced_a_action(L, setup)
    out = check_span_lemma(L, setup, [LieSubspace.zero(L)], "pairwise", action=action)
    assert out.status is CheckStatus.NOT_APPLICABLE
    assert "generate" in out.detail


def test_corrupted_constant_breaks_axioms():
    L = lie_ring_of(heisenberg27())
    bad = with_corrupted_constant(L)
    report = axiom_report(bad)
    assert not all(report.values())


def test_cross_check_catches_corruption():
    # class transfer also reacts to a corrupted table on this ring
    W = lie_ring_of(wreath81())
    bad = with_corrupted_constant(W)
    assert not all(axiom_report(bad).values()) or not check_class_transfer(bad, wreath81())


def test_ring_json_shape():
    L = lie_ring_of(heisenberg27())
    data = ring_to_json(L)
    assert data["class"] == 2
    assert [c["orders"] for c in data["components"]] == [[3, 3], [3]]
    assert all(len(b["value"]) == 1 for b in data["brackets"])


def test_pl_equals_l_guard():
    # every component order is coprime to p for a p'-group: verified via span lemma path
    G, setup = heis_setup()
    L = lie_ring_of(G)
    for orders in L.orders:
        assert all(m % setup.p for m in orders)
