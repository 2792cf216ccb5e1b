import pytest

from motzeta.properties import CHECKS, run_check
from motzeta.taskfile import PROPERTY_CHECKS


def test_registry_matches_task_kind():
    assert set(CHECKS) == set(PROPERTY_CHECKS)


@pytest.mark.parametrize("name", sorted(CHECKS))
@pytest.mark.parametrize("seed", [0, 11])
def test_check_passes(name, seed):
    passed, facts = run_check(name, seed)
    assert passed, facts


def test_seeded_runs_repeat():
    assert run_check("ring_axioms", 5, 10) == run_check("ring_axioms", 5, 10)
