"""Shared fixtures and the acceptance-criterion reporter."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT / "scripts"))
sys.path.insert(0, str(Path(__file__).resolve().parent))

DATA_DIR = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def fixture_data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def synth_inputs(tmp_path_factory):
    """Small synthetic raw corpus (WASSA dir + neutral CSV), 160 tweets/class."""
    from synth_corpus import write_corpus

    root = tmp_path_factory.mktemp("synth_raw")
    write_corpus(root, per_class=160, seed=20240901)
    return root / "wassa", root / "neutral.csv"


def pytest_runtest_logreport(report):
    """One PASS/FAIL line per acceptance criterion, keyed by test id."""
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" and report.passed:
        status = "PASS"
    elif report.failed:
        status = "FAIL"
    elif report.skipped:
        status = "SKIP"
    else:
        return
    print(f"\nACCEPTANCE {name}: {status}", file=sys.stderr)


def pytest_collection_modifyitems(config, items):
    # Acceptance criteria run last so their summary lines close the session.
    items.sort(key=lambda item: "test_acceptance" in item.nodeid)
