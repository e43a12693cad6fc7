from __future__ import annotations

import os
import sys
from functools import lru_cache
from pathlib import Path

import pytest

from circflow.graph import Graph
from circflow.graph6 import load_graph6_file

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))

EXTENDED = os.environ.get("CFN_EXTENDED") == "1"


@lru_cache(maxsize=None)
def corpus(name: str) -> tuple[Graph, ...]:
    with open(DATA / name) as fh:
        return tuple(load_graph6_file(fh))


def small_cubic() -> tuple[Graph, ...]:
    return corpus("cubic_bridgeless_4_to_12.g6")


def cubic14() -> tuple[Graph, ...]:
    return corpus("cubic_bridgeless_14.g6")


def pytest_collection_modifyitems(config, items):
    if EXTENDED:
        return
    skip = pytest.mark.skip(reason="extended tier; set CFN_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


# -- acceptance report -------------------------------------------------------

_REPORT: dict[str, tuple[str, str]] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion for the summary."""

    def record(key: str, passed: bool, detail: str = "") -> bool:
        _REPORT[key] = ("PASS" if passed else "FAIL", detail)
        return passed

    return record


def _order(key: str) -> tuple:
    head = key.split()[0]
    num = "".join(ch for ch in head if ch.isdigit())
    return (int(num) if num else 99, key)


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_REPORT, key=_order):
        status, detail = _REPORT[key]
        terminalreporter.write_line(f"{status}  {key}" + (f"  ({detail})" if detail else ""))
