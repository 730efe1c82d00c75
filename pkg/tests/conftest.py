import pytest

from ctxscope.bundle import BuildConfig, build_bundle
from ctxscope.corpus import GenConfig, generate_corpus
from ctxscope.embeddings import HashEmbeddingProvider
from ctxscope.retrieval import build_index

# The corpus/bundle pair exercised by the acceptance criteria:
# gen --seed 42 --employees 100 --items 1000 --dup-rate 0.05, build --k 7 --seed 7.
STUDY_GEN = GenConfig(seed=42, n_employees=100, n_items=1000, duplicate_name_rate=0.05)
STUDY_BUILD = BuildConfig(k=7, seed=7)


@pytest.fixture(scope="session")
def study_corpus():
    return generate_corpus(STUDY_GEN)


@pytest.fixture(scope="session")
def study_bundle(study_corpus):
    return build_bundle(study_corpus, STUDY_BUILD)


@pytest.fixture(scope="session")
def study_index(study_corpus):
    return build_index(study_corpus.items, HashEmbeddingProvider(STUDY_BUILD.embed_dim))


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(GenConfig(seed=7, n_employees=30, n_items=120, duplicate_name_rate=0.1))
