import pytest

from compnet.cuts import is_cut, min_comm_cut_exact
from compnet.testkit.x3c import (X3CInstance, build_x3c_reduction, example_instance,
                                 has_exact_cover, no_cover_instance, planted_instance)


def test_worked_instance():
    inst = example_instance()
    assert has_exact_cover(inst)
    net, s, t = build_x3c_reduction(inst)
    cut = min_comm_cut_exact(net, s, t)
    assert cut.value == pytest.approx(inst.m + inst.q) == pytest.approx(5.0)
    assert is_cut(net, s, t, cut)


def test_reduction_structure():
    inst = example_instance()
    net, s, t = build_x3c_reduction(inst)
    assert net.computation_nodes() == ["s2", "t1"]
    assert net.link(("u1", "v1")).capacity == 2.0
    assert net.link(("v3", "t1")).capacity == 1.0
    assert net.link(("s", "s1")).capacity == 6.0
    # elements 1 and 2 share the walk s2 -> u1 -> v1 -> u2 -> v2 -> t2
    assert ("v1", "u2") in net.links and ("v2", "t2") in net.links


def test_instance_validation():
    with pytest.raises(ValueError):
        X3CInstance((1, 2), ((1, 2, 3),))
    with pytest.raises(ValueError):
        X3CInstance((1, 2, 3), ((1, 2, 2),))
    with pytest.raises(ValueError):
        X3CInstance((1, 2, 3), ((1, 2, 4),))
    with pytest.raises(ValueError):
        X3CInstance((1, 2, 3), ((1, 2, 3),), k=1)
    assert X3CInstance((1, 2, 3), ((1, 2, 3),)).capacity == 2.0


@pytest.mark.parametrize("seed", range(6))
def test_planted_cover_gives_m_plus_q(seed):
    inst = planted_instance(q=2, extra=2, seed=seed)
    assert has_exact_cover(inst)
    net, s, t = build_x3c_reduction(inst)
    assert min_comm_cut_exact(net, s, t).value == pytest.approx(inst.m + inst.q)


@pytest.mark.parametrize("seed", range(6))
def test_no_cover_exceeds_m_plus_q(seed):
    inst = no_cover_instance(q=2, m=4, seed=seed)
    assert not has_exact_cover(inst)
    net, s, t = build_x3c_reduction(inst)
    assert min_comm_cut_exact(net, s, t).value > inst.m + inst.q + 1e-6


def test_walk_order_matters_for_planted_covers():
    # With the triples shuffled, a walk can enter along one element's prefix
    # and leave along another's suffix, bypassing every cover link.
    bad = 0
    for seed in range(40):
        inst = planted_instance(q=3, extra=3, seed=seed, cover_last=False)
        net, s, t = build_x3c_reduction(inst)
        if min_comm_cut_exact(net, s, t).value > inst.m + inst.q + 1e-6:
            bad += 1
    assert bad > 0
