from pathlib import Path

import pytest
from hypothesis import strategies as st

from tmencode.machine_file import MachineSpec, load_machine
from tmencode.tm import parity_machine

MACHINES = Path(__file__).resolve().parent.parent / "machines"


def parity_spec(n: int) -> MachineSpec:
    return MachineSpec(parity_machine(), ("1",) * n, 0, name=f"parity{n}")


@pytest.fixture
def parity3():
    return parity_spec(3)


@pytest.fixture
def parity2():
    return parity_spec(2)


@pytest.fixture
def looper():
    return load_machine(MACHINES / "looper.tm")


@pytest.fixture
def machines_dir():
    return MACHINES


seeds = st.integers(min_value=0, max_value=2**32 - 1)
