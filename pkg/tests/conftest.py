import pytest
from hypothesis import HealthCheck, settings

from gstree.core import Topology

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SCALING_NS = [2**6, 2**8, 2**10, 2**12, 2**14]
SCALING_SEEDS = range(5)
SCALING_KINDS = ("uniform", "adversarial")


@pytest.fixture(scope="session")
def scaling_matrix():
    """Tango reports for every (n, kind, seed) of the scaling benchmark, m = 20n, random trees."""
    from gstree.runner import RunConfig, run

    import time

    out = {}
    seconds = {}
    for n in SCALING_NS:
        t0 = time.perf_counter()
        for kind in SCALING_KINDS:
            for seed in SCALING_SEEDS:
                cfg = RunConfig(shape="random", n=n, tree_seed=seed, kind=kind, m=20 * n, seq_seed=seed)
                out[n, kind, seed] = run(cfg)
        seconds[n] = time.perf_counter() - t0
    out["seconds"] = seconds
    return out


@pytest.fixture
def path3():
    return Topology.from_edges(3, [(0, 1), (1, 2)])


# -- acceptance summary: one line per criterion at the end of the run --

_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        outcome = "PASS" if report.passed else "FAIL"
        _criteria[props["criterion"]] = (outcome, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        outcome, detail = _criteria[k]
        terminalreporter.write_line(f"criterion {k:>2}: {outcome}  {detail}")
