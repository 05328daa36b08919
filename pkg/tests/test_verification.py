import pytest

from prelie_posets import run_sweep
from prelie_posets.verification import LAWS, _count_tuples, _tuples, j_index_values


@pytest.mark.parametrize("law", ["nap", "prelie", "jacobi", "nap-co", "compat", "duality", "j-index",
                                 "ck-coassoc", "searrow-coassoc", "t0-consistency"])
def test_poset_sweeps_pass(law):
    report = run_sweep(law, 5)
    assert report.passed, report.failures[:3]
    assert report.instances == report.predicted > 0


@pytest.mark.parametrize("law", ["nap", "prelie", "jacobi", "nap-co", "compat", "duality"])
def test_topology_sweeps_pass(law):
    report = run_sweep(law, 4, "topology")
    assert report.passed, report.failures[:3]


def test_predicted_counts_are_independent_of_listing():
    for parts in (2, 3):
        for m in range(1, 7):
            assert len(_tuples("poset", m, parts)) == _count_tuples("poset", m, parts)


def test_known_instance_counts():
    assert run_sweep("nap-co", 4).instances == 1 + 1 + 3 + 10
    assert run_sweep("compat", 3).instances == 1 + 1 + 1   # (1,1), (1,2), (2,1)


def test_parallel_matches_serial():
    a = run_sweep("duality", 5)
    b = run_sweep("duality", 5, parallel=2)
    assert (a.instances, a.failures) == (b.instances, b.failures)


def test_failures_are_reported():
    report = run_sweep("nap-co", 3)
    report.failures.append({"inputs": ["x"], "residual": "r"})
    assert not report.passed
    assert report.to_json()["passed"] is False


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_sweep("nope", 3)
    with pytest.raises(ValueError):
        run_sweep("j-index", 3, "topology")
    with pytest.raises(ValueError):
        run_sweep("nap", 9)


def test_j_index_histogram_is_all_ones():
    hist = j_index_values(6)
    assert set(hist) == {1}
    assert hist[1] > 0


def test_every_law_has_a_description():
    assert all(law.description for law in LAWS.values())
