import math

import numpy as np
import pytest

from hyperlam import pspectral, verify
from hyperlam.hypergraph import (Hypergraph, Kind, PartitionSpec, complete_chromatic,
                                 complete_graph, turan_hypergraph)


def test_partite_sweep_example():
    rep = verify.verify_partite_extremal(6, 3, 2, 2.0)
    assert rep.passed and rep.status == verify.VERIFIED and rep.exit_code == 0
    case = rep.cases[0]
    assert case["maximizer"] == [2, 2, 2]
    assert case["lambda"] == pytest.approx(4.0, rel=1e-12)
    assert case["margin"] == pytest.approx(0.23356451614729412, rel=1e-9)
    assert rep.cases_checked == 3


def test_partite_sweep_value_on_unbalanced_graph():
    rep = verify.verify_partite_extremal(5, 2, 2, 2.0)
    assert rep.passed
    assert rep.cases[0]["lambda"] == pytest.approx(math.sqrt(6), rel=1e-12)


def test_chromatic_sweep_example():
    rep = verify.verify_chromatic_extremal(6, 2, 1.0)
    assert rep.passed
    case = rep.cases[0]
    assert case["lambda"] == pytest.approx(0.5, rel=1e-10)
    assert case["margin"] == pytest.approx(0.026652267919325623, rel=1e-7)


def test_chromatic_sweep_above_complete_range():
    # n = 5 > 2k: the balanced graph is not complete and stays below 0.48
    rep = verify.verify_chromatic_extremal(5, 2, 1.0)
    assert rep.passed
    assert rep.cases[0]["lambda"] < 0.48


@pytest.mark.parametrize("call", [lambda: verify.verify_partite_extremal(6, 2, 3, 2.0),
                                  lambda: verify.verify_partite_extremal(6, 3, 2, 1.0),
                                  lambda: verify.verify_partite_extremal(20, 3, 2, 2.0),
                                  lambda: verify.verify_chromatic_extremal(6, 1, 2.0),
                                  lambda: verify.verify_th4(2, 2, 1.0)])
def test_sweeps_reject_bad_parameters(call):
    with pytest.raises(ValueError):
        call()


def test_th4_equality_and_strict_cases():
    rep = verify.verify_th4(6, 2, 2.0)
    assert rep.passed
    by_sizes = {tuple(c["sizes"]): c for c in rep.cases}
    assert by_sizes[(3, 3)]["equality_expected"] and abs(by_sizes[(3, 3)]["slack"]) < 1e-8
    assert by_sizes[(1, 5)]["slack"] > 1e-6
    rep = verify.verify_th4(4, 3, 1.0)
    # sizes (1,1,2) give K_4^3 and sit on the bound
    assert rep.passed and all(c["equality_expected"] for c in rep.cases)


def test_bound_chain_sweeps():
    assert verify.verify_bound_chain(Kind.PARTITE, 7, 3, 2, 2.0).passed
    assert verify.verify_bound_chain("chromatic", 7, 3, 3, 3.0).passed
    with pytest.raises(ValueError):
        verify.verify_bound_chain(Kind.PARTITE, 7, 3, 2, 1.0)


def test_flag_records_reproduction_data():
    rep = verify.SweepReport("th1", "n=1", seed=5)
    rep.flag({"n": 1}, 2.0, 1.0, -1.0, "made up")
    assert rep.status == verify.VIOLATION and rep.exit_code == 2
    assert rep.violations[0] == {"parameters": {"n": 1}, "observed": 2.0, "expected": 1.0,
                                 "gap": -1.0, "seed": 5, "note": "made up"}


def test_parallel_runs_are_identical():
    cases = [dict(n=n, k=3, r=2, p=2.0) for n in range(4, 9)]
    one = verify.run_cases(verify.verify_partite_extremal, cases, jobs=1)
    two = verify.run_cases(verify.verify_partite_extremal, cases, jobs=2)
    a = verify.merge_reports("th1", "grid", one).to_dict()
    b = verify.merge_reports("th1", "grid", two).to_dict()
    assert a == b and a["cases_checked"] == sum(r.cases_checked for r in one)


def test_mst_and_maclaurin():
    rep = verify.verify_mst(PartitionSpec((1, 2, 3, 2)), 3, samples=10)
    assert rep.passed
    assert rep.cases[0]["lambda"] == pytest.approx(6 * 4 / 64, rel=1e-8)
    assert verify.maclaurin_holds([1, 1, 1, 1], 2)
    assert verify.maclaurin_holds([0.1, 2.0, 0.5], 3)
    assert not verify.maclaurin_holds([1.0, 1.0], 2, tol=-1e-3)
    with pytest.raises(ValueError):
        verify.verify_mst(PartitionSpec((2, 2)), 3)


def test_symmetry_on_families():
    G = complete_chromatic(PartitionSpec((2, 3), Kind.CHROMATIC), 3)
    rep = verify.verify_eigvec_symmetry(G, 2.0)
    assert rep.passed and rep.cases[0]["pairs"] == 1 + 3
    rep = verify.verify_eigvec_symmetry(turan_hypergraph(7, 3, 3), 1.5)
    assert rep.passed and rep.cases_checked == 3 + 1 + 1


def test_limit_decreases_to_edge_count():
    rep = verify.verify_limit(turan_hypergraph(5, 2, 2))
    assert rep.passed
    scaled = rep.cases[0]["scaled"]
    assert scaled[0] > scaled[-1] >= rep.cases[0]["target"] - 1e-9
    # a graph with a pendant edge still converges
    assert verify.verify_limit(Hypergraph(3, 5, [(0, 1, 2), (2, 3, 4)])).passed


def test_conjecture_search_small():
    rep = verify.conjecture_search(7, 2, 4, [1.0, 2.0])
    assert rep.status == verify.VERIFIED
    assert len(rep.cases) == 2 and rep.cases[0]["full_solver"] is not None
    for case in rep.cases:
        assert case["lambda"] < case["bound_co2"]


def test_conjecture_search_preconditions_and_budget():
    with pytest.raises(ValueError):
        verify.conjecture_search(6, 2, 4, [1.0])
    with pytest.raises(ValueError):
        verify.conjecture_search(9, 2, 3, [1.0])
    with pytest.raises(ValueError):
        verify.conjecture_search(13, 2, 4, [1.0])
    rep = verify.conjecture_search(9, 2, 4, [1.0], budget=0)
    assert rep.status == verify.BUDGET and rep.exit_code == 3 and rep.cases_checked == 0


def test_R_max_small_runs():
    rep = verify.verify_R_max(6, 2, samples=500)
    assert rep.passed
    case = rep.cases[0]
    assert case["max_found"] == pytest.approx(case["bound"], rel=1e-6)
    rep = verify.verify_R_max(5, 3, samples=200, s=0.0)
    assert rep.passed and rep.cases[0]["bound"] == 0
    with pytest.raises(ValueError):
        verify.verify_R_max(1, 2)


def test_family_values_drop_under_edge_deletion():
    G = complete_graph(5, 3)
    lam = pspectral.solve(G, pspectral.SolverConfig(p=2.0)).lam
    sub = G
    for e in G.edges[:3]:
        sub = sub.without_edge(e)
        val = pspectral.solve(sub, pspectral.SolverConfig(p=2.0)).lam
        assert val < lam
        lam = val


def test_witness_symmetric_under_class_swaps():
    res = pspectral.symmetric_solve(PartitionSpec((3, 3), Kind.CHROMATIC), 3, 1.0)
    a = res.extra["class_weights"]
    assert a[0] == pytest.approx(a[1], abs=1e-10)
    assert np.all(res.witness > 1e-10)
