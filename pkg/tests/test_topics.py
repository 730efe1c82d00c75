import numpy as np
import pytest

from ctxscope.corpus import DataItem
from ctxscope.embeddings import HashEmbeddingProvider, embed_batch
from ctxscope.errors import InputError
from ctxscope.topics import SamplingPolicy, TfidfLabeler, cluster_topics, label_topic, sample_items


def _item(i, content):
    return DataItem(
        id=f"item-{i:06d}", kind="file", title=f"doc {i}", content=content,
        participants=("emp-00001",), created_at="2024-01-01",
    )


def _unit_rows(rows):
    rows = np.asarray(rows, dtype=np.float64)
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def test_k1_puts_everything_in_topic_zero():
    vecs = _unit_rows(np.random.default_rng(0).standard_normal((12, 8)))
    assert set(cluster_topics(vecs, 1, seed=0).tolist()) == {0}


def test_perfectly_separable_groups():
    up = np.tile([1.0, 0.0], (5, 1))
    down = np.tile([-1.0, 0.0], (5, 1))
    labels = cluster_topics(np.vstack([up, down]), 2, seed=3)
    assert len(set(labels[:5].tolist())) == 1
    assert len(set(labels[5:].tolist())) == 1
    assert labels[0] != labels[5]


def test_within_cluster_cosine_beats_overall(study_corpus):
    items = study_corpus.items[:200]
    vecs = embed_batch(HashEmbeddingProvider(), [i.content for i in items])
    labels = cluster_topics(vecs, 7, seed=1)
    gram = vecs @ vecs.T
    off_diag = ~np.eye(len(items), dtype=bool)
    overall = gram[off_diag].mean()
    within = []
    for c in range(7):
        members = np.flatnonzero(labels == c)
        if len(members) > 1:
            sub = gram[np.ix_(members, members)]
            within.append(sub[~np.eye(len(members), dtype=bool)].mean())
    assert np.mean(within) >= overall


def test_partition_and_nonempty():
    vecs = _unit_rows(np.random.default_rng(5).standard_normal((40, 16)))
    labels = cluster_topics(vecs, 7, seed=9)
    assert labels.shape == (40,)
    counts = np.bincount(labels, minlength=7)
    assert (counts > 0).all()
    assert counts.sum() == 40


def test_seed_determinism():
    vecs = _unit_rows(np.random.default_rng(8).standard_normal((50, 12)))
    a = cluster_topics(vecs, 5, seed=42)
    b = cluster_topics(vecs, 5, seed=42)
    assert np.array_equal(a, b)


def test_too_few_items_rejected():
    vecs = _unit_rows(np.random.default_rng(0).standard_normal((3, 4)))
    with pytest.raises(InputError):
        cluster_topics(vecs, 4, seed=0)


# sample_items


def test_under_budget_returns_full_set():
    members = [_item(i, "x" * 20) for i in range(5)]
    sampled = sample_items(members, SamplingPolicy(budget=1000, seed=1))
    assert sorted(i.id for i in sampled) == sorted(i.id for i in members)


def test_budget_arithmetic_forces_two_items():
    members = [_item(i, "y" * 50) for i in range(10)]
    sampled = sample_items(members, SamplingPolicy(budget=100, seed=1))
    assert len(sampled) == 2


def test_first_item_kept_even_if_over_budget():
    members = [_item(0, "z" * 500)]
    assert len(sample_items(members, SamplingPolicy(budget=100, seed=1))) == 1


def test_sampling_is_seed_deterministic():
    members = [_item(i, "w" * 40) for i in range(20)]
    a = sample_items(members, SamplingPolicy(budget=200, seed=9))
    b = sample_items(members, SamplingPolicy(budget=200, seed=9))
    assert [i.id for i in a] == [i.id for i in b]


def test_empty_members_rejected():
    with pytest.raises(InputError):
        sample_items([], SamplingPolicy())


# labeling


def test_marketing_sample_gets_marketing_label():
    corpus = (
        [_item(i, "marketing campaign launch spring push") for i in range(5)]
        + [_item(5 + i, "unrelated quarterly ledger entry totals") for i in range(10)]
    )
    labeler = TfidfLabeler(corpus)
    label = label_topic(corpus[:5], labeler)
    assert "Marketing" in label
    assert len(label.split()) <= 8


def test_hand_computed_tfidf_label():
    # Three-document corpus: df(alpha)=1 so idf=ln(3); tf(alpha)=2 in the
    # sample, giving alpha the top score; beta has idf ln(3/3)=0.
    docs = [_item(0, "alpha alpha beta"), _item(1, "beta gamma gamma"), _item(2, "beta delta")]
    labeler = TfidfLabeler(docs)
    label = label_topic([docs[0]], labeler)
    assert label.startswith("Alpha")


def test_empty_sample_rejected():
    labeler = TfidfLabeler([_item(0, "a")])
    with pytest.raises(InputError):
        label_topic([], labeler)


def test_failing_labeler_falls_back():
    class Broken:
        def label(self, sampled, budget=8000):
            raise RuntimeError("remote down")

    docs = [_item(0, "alpha beta"), _item(1, "gamma delta")]
    label = label_topic([docs[0]], Broken(), fallback=TfidfLabeler(docs))
    assert label


def test_every_bundle_topic_labeled(study_bundle):
    assert all(t.label for t in study_bundle.topics)
    assert all(len(t.label.split()) <= 8 for t in study_bundle.topics)
