import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def _decode(v):
    return complex(*v) if isinstance(v, list) else v


@pytest.fixture(scope="session")
def oracle():
    data = json.loads((FIXTURES / "oracle_values.json").read_text())
    for case in data["cases"]:
        case["params"] = {k: _decode(v) for k, v in case["params"].items()}
        case["z"] = complex(*case["z"])
        case["value"] = complex(float(case["value"][0]), float(case["value"][1]))
    for g in data["golden"].values():
        g["z"] = complex(*g["z"])
        g["value"] = complex(float(g["value"][0]), float(g["value"][1]))
        if "s" in g:
            g["s"] = complex(*g["s"])
    return data


# acceptance verdicts, filled in by tests/test_acceptance.py and echoed at the end of the run
VERDICTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def verdict():
    def record(n: int, passed: bool, detail: str) -> None:
        VERDICTS[n] = (bool(passed), detail)
        print(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        ok, detail = VERDICTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
