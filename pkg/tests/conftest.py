import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

FOUR_STUDENTS_CSV = "student_id,cohort,initial,final\ns1,A,73,93\ns2,A,73,90\ns3,A,73,85\ns4,A,73,67\n"


@pytest.fixture
def four_students_file(tmp_path):
    path = tmp_path / "four_students.csv"
    path.write_text(FOUR_STUDENTS_CSV)
    return path


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
