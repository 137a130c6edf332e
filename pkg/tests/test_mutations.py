import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import mutations  # noqa: E402


@pytest.mark.parametrize("name", sorted(mutations.CATALOGUE))
def test_single_point_mutation_is_caught(name):
    report, error = mutations.run(name)
    if report is None:
        # a refused construction must say where the input went wrong
        assert "vertex" in str(error) or "edge" in str(error), error
        return
    assert not report.ok, f"{name} went undetected"
    assert mutations.localized(report), report.failed_axioms()
