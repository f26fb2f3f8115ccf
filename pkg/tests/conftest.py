from functools import lru_cache

import numpy as np
import pytest

from mckay3.reflection import FamilySpec, builtin_group

RANK3_FIXED = ("Z2cubed", "Tetrahedral", "Octahedral", "Icosahedral")
DIHEDRAL_N = range(3, 31)


@lru_cache(maxsize=None)
def _group(family, n=None, rank=None):
    return builtin_group(FamilySpec(family, n, rank))


@pytest.fixture(scope="session")
def group():
    """Cached built-in group lookup: group("Octahedral"), group("DihedralxZ2", 5)."""
    return _group


def all_specs():
    specs = [FamilySpec("Z2", rank=r) for r in (1, 2, 3)]
    specs += [FamilySpec("Z2xZ2", rank=r) for r in (2, 3)]
    specs += [FamilySpec(f) for f in RANK3_FIXED]
    specs += [FamilySpec(f, n) for f in ("DihedralRank2", "Dihedral", "DihedralxZ2") for n in DIHEDRAL_N]
    return specs


def spec_group(spec):
    return _group(spec.family, spec.n, spec.rank)


def to_complex(m):
    """Floating-point copy of an exact matrix, for numeric cross-checks."""
    return np.array([[complex(x) for x in row] for row in m.rows])


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
