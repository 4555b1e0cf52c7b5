from pathlib import Path

import pytest

from src.config.config_defaults import ConfigDefault
from src.inference.pipeline import load_resources

FIXED_CLOCK = "2020-01-01T00:00:00Z"


def make_config(out: Path, **kwargs) -> ConfigDefault:
    config = ConfigDefault(out=out, fixed_clock=FIXED_CLOCK, **kwargs)
    config.after_init()
    return config


@pytest.fixture
def config(tmp_path) -> ConfigDefault:
    return make_config(Path(tmp_path, "outputs"))


@pytest.fixture(scope="session")
def resources(tmp_path_factory):
    """Bundled inputs, loaded once."""
    return load_resources(make_config(tmp_path_factory.mktemp("outputs")))
