import pytest

from bnexplain import bench

import oracle


@pytest.fixture(scope="session")
def nets():
    return {fid: bench.fixture(fid) for fid in bench.FIXTURE_IDS}


@pytest.fixture(scope="session")
def joints(nets):
    return {fid: oracle.joint(net) for fid, net in nets.items()}


@pytest.fixture(scope="session")
def scenarios():
    """(scenario id, fixture id, evidence dict) triples for every golden case."""
    return [(s.scenario_id, s.fixture_id, dict(s.evidence))
            for s in bench.SCENARIOS.values()]
