import numpy as np
import pytest

from bettiseq.seqdata import PositionCloud

_ACCEPTANCE_RESULTS = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if "test_acceptance" not in str(item.fspath):
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        _ACCEPTANCE_RESULTS.append((item.name, report.outcome, report.when))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome, _ in _ACCEPTANCE_RESULTS:
        label = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome)
        terminalreporter.write_line(f"{label:4s}  {name}")

PRIMER_REF = "GGGGAACTTCTCCTGCTAGAAT"
PRIMER_MUT_SINGLE = "AGGGAACTTCTCCTGCTAGAAT"
PRIMER_MUT_FULL = "AACGAATTTTTCTTGGTACAAT"

TOY_DATASET = """\
# toy corpus used across CLI tests
id,na_sequence,protein_sequence,label,label_unit
R1,GGGGAACTTCTCCTGCTAGAAT,MKVLILACLVA,11.0,pkd
R2,AGGGAACTTCTCCTGCTAGAAT,MKVLILACLVA,9.5,pkd
R3,ACGTACGTACGT,MKWQASTNDEG,-8.2,dg_kcal_per_mol
R4,CCCCCAAAAATTTTTGGGGG,AAAAAAAAAA,8.8,pkd
R5,ATATATATAT,MKVPQRSTWY,6.1,pkd
"""


@pytest.fixture
def toy_dataset(tmp_path):
    path = tmp_path / "toy.csv"
    path.write_text(TOY_DATASET, encoding="utf-8")
    return path


def random_cloud(rng: np.random.Generator, max_n: int, position_range: int) -> PositionCloud:
    n = int(rng.integers(1, max_n + 1))
    picks = rng.choice(position_range, size=n, replace=False)
    return PositionCloud(tuple(sorted(int(p) + 1 for p in picks)))
