import pytest

from jamsim.scenario import SystemParams


@pytest.fixture
def single_user_params():
    # M=100, K=1, beta=beta_w=1, eta=1, T=200, budgets chosen so p_t=p_d=q_t=q_d=10
    return SystemParams(num_antennas=100, coherence_length=200, training_length=1,
                        user_fading=[1.0], jammer_fading=1.0, user_budget=10.0, jammer_budget=10.0)


def random_params(rng, max_users=4, max_antennas=64, max_eta=8, T=200):
    K = int(rng.integers(1, max_users + 1))
    return SystemParams(
        num_antennas=int(rng.integers(2, max_antennas + 1)),
        coherence_length=T,
        training_length=int(rng.integers(K, max(K, max_eta) + 1)),
        user_fading=10 ** rng.uniform(-1.5, 0.0, K),
        jammer_fading=float(10 ** rng.uniform(-1.0, 0.0)),
        user_budget=float(10 ** rng.uniform(0.0, 2.0)),
        jammer_budget=float(10 ** rng.uniform(0.0, 2.0)),
    )


ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
