import numpy as np
import pytest

from varnec.code import example_code
from varnec.ff import FieldSpec
from varnec.io import fixture_path, load_code
from varnec.randomized import random_code
from varnec.topology import Network, example_network


def butterfly_network() -> Network:
    # classic two-sink butterfly: 9 channels, C_t = 2 at both sinks
    return Network(
        ["s", "a", "b", "c", "d", "t1", "t2"],
        "s",
        ["t1", "t2"],
        [
            ("e1", "s", "a"),
            ("e2", "s", "b"),
            ("e3", "a", "t1"),
            ("e4", "a", "c"),
            ("e5", "b", "c"),
            ("e6", "b", "t2"),
            ("e7", "c", "d"),
            ("e8", "d", "t1"),
            ("e9", "d", "t2"),
        ],
        name="butterfly",
    )


def relay_network() -> Network:
    # direct and relayed paths with parallel channels; C_t1 = 3, C_t2 = 3
    return Network(
        ["s", "r", "t1", "t2"],
        "s",
        ["t1", "t2"],
        [
            ("e1", "s", "r"),
            ("e2", "s", "r"),
            ("e3", "s", "t1"),
            ("e4", "r", "t1"),
            ("e5", "r", "t1"),
            ("e6", "s", "t2"),
            ("e7", "r", "t2"),
            ("e8", "r", "t2"),
        ],
        name="relay",
    )


def random_regular_codes(network, rate, p, count, seed=0):
    """``count`` seeded random codes that are regular (rank F_t = ω at every sink)."""
    rng = np.random.default_rng(seed)
    field = FieldSpec(p)
    out = []
    while len(out) < count:
        code = random_code(network, rate, field, rng)
        if code.is_regular():
            out.append(code)
    return out


@pytest.fixture
def example():
    return example_network()


@pytest.fixture
def code2():
    return example_code()


@pytest.fixture
def code1(example):
    return load_code(fixture_path("example_code_rate1.json"), example)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
