"""Acceptance gate: one test and one printed PASS/FAIL line per criterion."""

import subprocess
import sys

import pytest

from nonradon import acceptance
from nonradon.cli import determinism_examples


@pytest.fixture
def report(capsys):
    def emit(outcome):
        with capsys.disabled():
            print("\n" + outcome.line())
        assert outcome.ok, outcome.line()

    return emit


def test_criterion_1_approximate_additivity(report):
    report(acceptance.approximate_additivity())


def test_criterion_2_ideal_laws(report):
    report(acceptance.ideal_axioms())


def test_criterion_3_partition_oracle(report):
    report(acceptance.oracle_agreement())


def test_criterion_4_escape_witness(report):
    report(acceptance.non_triviality())


def test_criterion_5_linear_systems(report):
    report(acceptance.linear_systems())


def test_criterion_6_point_built_elements(report):
    report(acceptance.from_points_suite())


def test_criterion_7_refutation(report):
    report(acceptance.refutation())


def _cli(argv):
    proc = subprocess.run([sys.executable, "-m", "nonradon", *argv], capture_output=True)
    return proc.returncode, proc.stdout


def test_criterion_8_determinism(report, tmp_path):
    examples = determinism_examples(tmp_path)
    outcome = acceptance.determinism(_cli, examples)
    first = _cli(["selftest"])
    second = _cli(["selftest", "--jobs", "4"])
    stable = first == second and first[0] == 0
    detail = outcome.detail + f"; selftest {'stable and passing' if stable else 'unstable or failing'}"
    report(acceptance.Outcome(8, outcome.name, outcome.ok and stable, detail))
