import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dgdeform.cli import resolve_path  # noqa: E402
from dgdeform.io import Instance, read_json  # noqa: E402

FINITE_MC = ["contr_r2_f2", "keller_pair_r2_f2", "keller_pair_r2_f3", "keller_pair_r3_f2",
             "keller_pair_r3_f3", "kx_nc_f2", "kx_r2_f2", "kx_r2_f3", "kx_r2_f5", "kx_r3_f2",
             "kx_rdiff_f2", "kx_rtheta_f3"]


def load(name, field=None):
    return Instance(read_json(resolve_path(name)), field)


@pytest.fixture(scope="session")
def corpus():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load(name)
        return cache[name]
    return get


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
