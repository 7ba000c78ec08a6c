import numpy as np
import pytest

from splitqpe.circuit import Circuit
from splitqpe.circuit import gates as g
from splitqpe.models import PPPParams, build_ppp, hamiltonian
from splitqpe.models.runs import EthyleneRun


@pytest.fixture
def params():
    return PPPParams()


@pytest.fixture
def ethylene_h(params):
    return hamiltonian(params)


@pytest.fixture
def ethylene_parts(params):
    return build_ppp(params)


@pytest.fixture
def se_run_m5():
    return EthyleneRun(method="se", m=5, tau=10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_circuit(n: int, depth: int, rng: np.random.Generator) -> Circuit:
    """
    Measurement-free circuit drawn from every unitary kind the IR supports
    """
    c = Circuit(n)
    for _ in range(depth):
        kind = rng.integers(0, 8)
        q = [int(x) for x in rng.permutation(n)[:3]]
        angle = float(rng.uniform(-np.pi, np.pi))
        if kind == 0:
            c.add(g.h(q[0]))
        elif kind == 1:
            c.add(g.s(q[0]))
        elif kind == 2:
            c.add(g.rz(q[0], angle))
        elif kind == 3:
            c.add(g.ry(q[0], angle, control=q[1]))
        elif kind == 4:
            c.add(g.phase(q[0], angle / (2 * np.pi), control=q[1]))
        elif kind == 5:
            c.add(g.cx(q[0], q[1]))
        elif kind == 6:
            c.add(g.ccx(q[0], q[1], q[2]))
        else:
            c.add(g.cswap(q[0], q[1], q[2]))
    return c


@pytest.fixture
def make_random_circuit(rng):
    def make(n: int = 4, depth: int = 25) -> Circuit:
        return random_circuit(n, depth, rng)
    return make
