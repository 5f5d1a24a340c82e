import numpy as np
import pytest

from risjam.channel import build_channel_set
from risjam.harness import default_scenario
from risjam.scene import AntennaPattern, Position3D, RisGeometry, ScenarioConfig


@pytest.fixture(scope="session")
def table_scenario():
    return default_scenario()


@pytest.fixture(scope="session")
def table_channels(table_scenario):
    return build_channel_set(table_scenario)


def make_random_scenario(rng: np.random.Generator, rows: int = 4, cols: int = 4) -> ScenarioConfig:
    """Small random front-hemisphere scenario (rows x cols panel at the origin)."""

    def node(y_side: float) -> Position3D:
        return Position3D(
            float(rng.uniform(0.5, 2.0)),
            float(y_side * rng.uniform(0.2, 1.5)),
            float(rng.uniform(-0.3, 0.3)),
        )

    return ScenarioConfig(
        fc_hz=3.75e9,
        fs_hz=0.5e6,
        pt_dbm=float(rng.uniform(-20.0, 0.0)),
        noise_bob_dbm=-90.0,
        noise_eve_dbm=-90.0,
        cs_tx=node(+1.0),
        an_tx=node(-1.0),
        bob=node(+1.0),
        eve=node(-1.0),
        ris=RisGeometry(rows=rows, cols=cols, spacing=0.041, center=Position3D(0.0, 0.0, 0.0)),
        tx_pattern=AntennaPattern(kind="cosine", boresight_gain_dbi=13.0),
        ris_element_pattern=AntennaPattern(kind="cosine"),
    )
