import sys
from pathlib import Path

import pytest

from rtsim import DeviceDb, SimConfig, SimulationRun, SyncMode

sys.path.insert(0, str(Path(__file__).parent))

FULL_DDB = {
    "devices": [
        {"name": "core", "kind": "core"},
        {"name": "ttl0", "kind": "ttl_out"},
        {"name": "ttl1", "kind": "ttl_out"},
        {"name": "in0", "kind": "ttl_in"},
        {"name": "counter0", "kind": "edge_counter"},
        {"name": "dds0", "kind": "dds"},
        {"name": "adc0", "kind": "adc", "params": {"channels": 2}},
    ]
}


@pytest.fixture
def full_ddb() -> DeviceDb:
    return DeviceDb.from_dict(FULL_DDB)


@pytest.fixture
def make_run(full_ddb):
    """Factory for bare simulation instances (no experiment wrapper)."""

    def factory(mode=SyncMode.REGULAR, seed=0, ddb=None, **config_kwargs) -> SimulationRun:
        config = SimConfig(mode=mode, seed=seed, **config_kwargs)
        return SimulationRun(ddb if ddb is not None else full_ddb, config)

    return factory
