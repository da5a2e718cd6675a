import pytest

from tendonsense import SimConfig, extract_dataset, generate_corpus

CORPUS_SEED = 7


@pytest.fixture(scope="session")
def default_cfg():
    return SimConfig()


@pytest.fixture(scope="session")
def texture_fc_traces(default_cfg):
    return generate_corpus("texture", "FC", 60, default_cfg, CORPUS_SEED)


@pytest.fixture(scope="session")
def texture_fc_ds(texture_fc_traces):
    return extract_dataset(texture_fc_traces)


@pytest.fixture(scope="session")
def texture_ac_ds(default_cfg):
    return extract_dataset(generate_corpus("texture", "AC", 60, default_cfg, CORPUS_SEED))


@pytest.fixture(scope="session")
def stiffness_fc_traces(default_cfg):
    return generate_corpus("stiffness", "FC", 60, default_cfg, CORPUS_SEED)


@pytest.fixture(scope="session")
def stiffness_fc_ds(stiffness_fc_traces):
    return extract_dataset(stiffness_fc_traces)
