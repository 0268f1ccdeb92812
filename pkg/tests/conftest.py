import numpy as np
import pytest


def central_gradient_hessian(fn, p, h):
    """Central differences of a scalar function: gradient and Hessian with step h."""
    p = np.asarray(p, dtype=float)
    n = len(p)
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    f0 = fn(p)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        grad[i] = (fn(p + e) - fn(p - e)) / (2 * h)
        hess[i, i] = (fn(p + e) - 2 * f0 + fn(p - e)) / (h * h)
        for j in range(i + 1, n):
            d = np.zeros(n)
            d[j] = h
            hess[i, j] = hess[j, i] = (fn(p + e + d) - fn(p + e - d) - fn(p - e + d) + fn(p - e - d)) / (4 * h * h)
    return grad, hess


def richardson(fn, p, h):
    """Richardson-extrapolated central differences (error O(h^4))."""
    g1, H1 = central_gradient_hessian(fn, p, h)
    g2, H2 = central_gradient_hessian(fn, p, h / 2)
    return (4 * g2 - g1) / 3, (4 * H2 - H1) / 3


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
