import numpy as np
import pytest

from nppt_lab.linalg import HermitianOperator, single_copy_dims

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        key = (mark.args[0], item.name)
        _ACCEPTANCE[key] = rep.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    by_k = {}
    for (k, name), outcome in sorted(_ACCEPTANCE.items()):
        by_k.setdefault(k, []).append((name, outcome))
    for k, runs in sorted(by_k.items()):
        failed = [name for name, outcome in runs if outcome != "passed"]
        status = "FAIL" if failed else "PASS"
        detail = f"  failing: {', '.join(failed)}" if failed else ""
        terminalreporter.write_line(f"criterion {k}: {status} ({len(runs)} case(s)){detail}")


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def random_op(rng, d):
    return HermitianOperator(single_copy_dims(d), random_hermitian(rng, d * d))


def pair_minimum(matrix):
    """Brute force: min over pairs of basis states x, y of the lowest eigenvalue
    of the 2x2 principal submatrix (a|x> + b|y> always has Schmidt rank <= 2)."""
    m = np.asarray(matrix)
    diag = np.diag(m).real
    p, q = diag[:, None], diag[None, :]
    c2 = np.abs(m) ** 2
    low = (p + q) / 2 - np.sqrt(((p - q) / 2) ** 2 + c2)
    np.fill_diagonal(low, np.inf)
    return float(min(low.min(), diag.min()))


@pytest.fixture
def rng():
    return np.random.default_rng(20061017)
