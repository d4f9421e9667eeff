import numpy as np
import pytest

from fracblow.criterion import SystemParams


def random_power_law_tuples(n=1000, seed=1):
    """Random (dim, alpha, beta, rho, sigma) with beta_1 beta_2 > 1."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        alpha = tuple(rng.uniform(0.5, 2.0, 2))
        beta = tuple(rng.uniform(1.0, 4.0, 2))
        if beta[0] * beta[1] <= 1:
            continue
        rho = tuple(3.0 - rng.uniform(0.0, 3.0, 2))  # (0, 3]
        sigma = tuple(2.0 - rng.uniform(0.0, 3.0, 2))  # (-1, 2]
        dim = int(rng.integers(1, 5))
        out.append((dim, alpha, beta, rho, sigma))
    return out


@pytest.fixture(scope="session")
def power_law_tuples():
    return random_power_law_tuples()


@pytest.fixture(scope="session")
def heuristic_agreement(power_law_tuples):
    """Per tuple: (exact exponent, exact verdict, heuristic verdict)."""
    from fracblow.criterion import classify_integral, eval_F, theta_exponents, exponent_verdict

    rows = []
    for dim, alpha, beta, rho, sigma in power_law_tuples:
        params = SystemParams.power_law(dim, alpha, beta, rho, sigma)
        th = theta_exponents(dim, alpha, beta, rho, sigma)
        heur = classify_integral(lambda t, p=params: eval_F(p, t))
        rows.append((th.exponent, exponent_verdict(th.exponent_exact), heur.verdict))
    return rows


_ACCEPTANCE = {}


@pytest.fixture
def acceptance(request):
    """Record a criterion verdict; the summary is printed at the end of the session."""

    def record(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
