import numpy as np
import pytest

from kisengine.config import EngineConfig
from kisengine.corpus import load_manifest
from kisengine.engine import Engine
from kisengine.synth import generate_corpus


@pytest.fixture(scope="session")
def synth_corpus(tmp_path_factory):
    """20 videos x 10 shots with distinct quadrant keyframes and a
    16-label concept bank; the workhorse corpus for oracle tests."""
    root = tmp_path_factory.mktemp("synth200")
    manifest = generate_corpus(root, 20, 10, seed=7, concept_labels=16)
    return load_manifest(manifest)


@pytest.fixture(scope="session")
def synth_engine(synth_corpus):
    return Engine.build(synth_corpus, EngineConfig())


@pytest.fixture(scope="session")
def tiny_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("tiny")
    manifest = generate_corpus(root, 2, 2, seed=3, concept_labels=4)
    return load_manifest(manifest)


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
