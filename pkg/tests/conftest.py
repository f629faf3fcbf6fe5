from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from toric_sums.exact import affine_rank

settings.register_profile(
    "default",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")


def pytest_configure(config):
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when not in ("setup", "call"):
        return
    num, title = marker.args
    table = item.config._criteria
    prev = table.get(num, (title, "PASS"))[1]
    status = "PASS" if rep.passed and prev == "PASS" else ("SKIP" if rep.skipped else "FAIL")
    if rep.when == "setup" and rep.passed:
        return
    table[num] = (title, status if prev == "PASS" else prev)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    table = getattr(config, "_criteria", {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(table):
        title, status = table[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {title}")


# --- shared strategies -------------------------------------------------------------


@st.composite
def full_dim_point_sets(draw, max_n: int = 3, coord: int = 3, max_points: int = 5):
    """Exponent sets in dimension n <= max_n whose Newton polytope is full-dimensional."""
    n = draw(st.integers(1, max_n))
    vec = st.tuples(*[st.integers(-coord, coord)] * n).filter(any)
    pts = draw(st.lists(vec, min_size=n, max_size=max(n, max_points), unique=True))
    if affine_rank([(0,) * n] + list(pts)) != n:
        # pad with unit vectors so the sample is usable instead of discarded
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            if e not in pts:
                pts.append(e)
    return n, pts
