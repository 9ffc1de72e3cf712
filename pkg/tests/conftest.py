import random
import sys

import pytest
from hypothesis import settings

from theta_forge.qform import FormError, validate
from theta_forge.tables import TABLE

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

GRAM_2_13 = "2,0,1,1;0,4,0,1;1,0,2,0;1,1,0,2"


@pytest.fixture(params=TABLE, ids=lambda r: f"k{r.k}_N{r.N}")
def row(request):
    return request.param


def random_forms(count: int, seed: int = 20240611, dims=(2, 4), bound: int = 6):
    """Deterministic sample of valid Gram matrices with entries in [-bound, bound]."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        r = rng.choice(dims)
        m = [[0] * r for _ in range(r)]
        for i in range(r):
            m[i][i] = rng.choice(range(2, bound + 1, 2))
            for j in range(i + 1, r):
                m[i][j] = m[j][i] = rng.randint(-bound, bound)
        try:
            out.append(validate(m))
        except FormError:
            continue
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
