import itertools
import os
import sys
from pathlib import Path

import numpy as np
import pytest

from powerca.io import read_table

FIXTURE_DIRS = [Path(__file__).parent / "fixtures"]
if os.environ.get("POWERCA_FIXTURES"):
    FIXTURE_DIRS.insert(0, Path(os.environ["POWERCA_FIXTURES"]))


def load_fixture(name):
    """Load a dataset CSV or skip with a visible notice."""
    for d in FIXTURE_DIRS:
        path = d / f"{name}.csv"
        if path.exists():
            return read_table(path)
    pytest.skip(
        f"dataset fixture {name}.csv not found in {[str(d) for d in FIXTURE_DIRS]}; "
        "see tests/fixtures/README.md"
    )


def brute_force_l1(S):
    """max over all 2**J sign vectors u of ||S u||_1, with every maximizer."""
    S = np.asarray(S)
    best, argmax = None, []
    for u in itertools.product((1.0, -1.0), repeat=S.shape[1]):
        val = np.abs(S @ np.array(u)).sum()
        if best is None or val > best + 1e-12 * max(1.0, abs(best)):
            best, argmax = val, [np.array(u)]
        elif abs(val - best) <= 1e-12 * max(1.0, abs(best)):
            argmax.append(np.array(u))
    return best, argmax


def svd_condition_violations(d):
    """Largest violation of each weighted SVD condition, relative to delta_1."""
    mr, mc = d.source.row_metric, d.source.col_metric
    out = {"dispersion": 0.0, "mean": 0.0, "orthogonality": 0.0, "order": 0.0}
    if not d.axes:
        return out
    scale = d.axes[0].delta
    for a, ax in enumerate(d.axes):
        out["dispersion"] = max(
            out["dispersion"],
            abs(np.sum(ax.f**2 * mr) - ax.delta**2) / scale**2,
            abs(np.sum(ax.g**2 * mc) - ax.delta**2) / scale**2,
        )
        out["mean"] = max(out["mean"], abs(ax.f @ mr) / scale, abs(ax.g @ mc) / scale)
        for b in range(a):
            other = d.axes[b]
            out["orthogonality"] = max(
                out["orthogonality"],
                abs(np.sum(ax.f * other.f * mr)) / scale**2,
                abs(np.sum(ax.g * other.g * mc)) / scale**2,
            )
            if ax.delta > other.delta:
                out["order"] = max(out["order"], (ax.delta - other.delta) / scale)
    return out


def _sgn(x):
    return np.where(x >= 0, 1.0, -1.0)


def _stored_or(signs, x):
    return _sgn(x) if signs is None else signs


def taxicab_condition_violations(d):
    """Largest violation of each taxicab SVD condition, relative to delta_1.

    Sign orthogonality uses the stored sign vectors (sign(0) = +1).
    """
    mr, mc = d.source.row_metric, d.source.col_metric
    out = {"dispersion": 0.0, "mean": 0.0, "sign_orthogonality": 0.0}
    if not d.axes:
        return out
    scale = d.axes[0].delta
    for a, ax in enumerate(d.axes):
        out["dispersion"] = max(
            out["dispersion"],
            abs(np.sum(np.abs(ax.f) * mr) - ax.delta) / scale,
            abs(np.sum(np.abs(ax.g) * mc) - ax.delta) / scale,
        )
        out["mean"] = max(out["mean"], abs(ax.f @ mr) / scale, abs(ax.g @ mc) / scale)
        for b in range(a):
            other = d.axes[b]
            out["sign_orthogonality"] = max(
                out["sign_orthogonality"],
                abs(np.sum(ax.f * _stored_or(other.v, other.f) * mr)) / scale,
                abs(np.sum(ax.g * _stored_or(other.u, other.g) * mc)) / scale,
            )
    return out


def condition_violations(d):
    if d.method == "svd":
        return svd_condition_violations(d)
    return taxicab_condition_violations(d)


def reconstruction_error(d):
    """max|tau - full reconstruction| computed directly from the axis triples,
    relative to the magnitude of the input the triplet was built from (an
    interaction that is pure rounding noise has no axes to rebuild it)."""
    tau = d.source.tau
    approx = sum((np.outer(a.f, a.g) / a.delta for a in d.axes), np.zeros(tau.shape))
    scale = max(np.abs(tau).max(), d.source.scale, 1e-300)
    return float(np.abs(tau - approx).max() / scale)


def assert_conditions(d, tol=1e-8):
    viol = condition_violations(d)
    assert max(viol.values()) <= tol, viol
    assert reconstruction_error(d) <= tol


@pytest.fixture
def rng():
    return np.random.default_rng(20230117)


def random_positive_table(rng, I, J, low=1, high=100):
    return rng.integers(low, high + 1, size=(I, J)).astype(float)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
