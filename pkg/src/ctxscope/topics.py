"""Topic modeling: spherical k-means over unit embeddings plus offline labeling.

Clustering is spherical k-means (assignment by cosine, recentering by the
normalized mean, which maximizes within-cluster cosine for unit vectors):
farthest-point initialization from a seeded start, then assign/recenter until
the assignment is fixed or ``max_iters`` is reached. Empty clusters are
repaired by splitting the largest cluster at its farthest member so exactly k
non-empty topics always come out.

Labels come from a corpus-statistics TF-IDF labeler over a seeded,
budget-capped sample of member items; an LLM labeler fits behind the same
callable shape but is cosmetic to the geometry and never used in tests.
"""

import random
from collections import Counter
from dataclasses import dataclass
from math import log

import numpy as np

from .corpus import DataItem
from .errors import InputError
from .text import tokenize

MAX_ITERS = 100


@dataclass
class Topic:
    id: int
    label: str
    member_ids: list[str]  # sorted
    centroid: np.ndarray


@dataclass(frozen=True)
class SamplingPolicy:
    budget: int = 8000  # max total characters fed to a labeler/summarizer
    seed: int = 0

    def validate(self) -> None:
        if self.budget <= 0:
            raise InputError(f"budget must be positive, got {self.budget}")


def cluster_topics(embeddings: np.ndarray, k: int, seed: int, max_iters: int = MAX_ITERS) -> np.ndarray:
    """Assign each row of ``embeddings`` (unit vectors) to one of k topics.

    Returns an int array of topic ids in [0, k). Deterministic under a fixed
    seed; every topic is non-empty.
    """
    vectors = np.asarray(embeddings, dtype=np.float64)
    n = vectors.shape[0]
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if n < k:
        raise InputError(f"need at least k={k} items, got {n}")

    centroids = _farthest_point_init(vectors, k, seed)
    assignment = np.full(n, -1, dtype=np.int64)
    prev_objective = -np.inf
    for _ in range(max_iters):
        sims = vectors @ centroids.T  # (n, k)
        new_assignment = np.argmax(sims, axis=1)
        new_assignment = _repair_empty(vectors, centroids, new_assignment, k)
        centroids = _recenter(vectors, new_assignment, centroids, k)
        objective = float(np.sum(vectors * centroids[new_assignment]))
        # Alternating maximization: the within-cluster cosine sum never drops.
        assert objective >= prev_objective - 1e-9, (objective, prev_objective)
        prev_objective = objective
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
    return assignment


def _farthest_point_init(vectors: np.ndarray, k: int, seed: int) -> np.ndarray:
    n = vectors.shape[0]
    rng = random.Random(seed)
    chosen = [rng.randrange(n)]
    max_sim = vectors @ vectors[chosen[0]]
    while len(chosen) < k:
        # Next seed point is the one least similar to everything chosen so far.
        nxt = int(np.argmin(max_sim))
        chosen.append(nxt)
        max_sim = np.maximum(max_sim, vectors @ vectors[nxt])
    return vectors[chosen].copy()


def _repair_empty(vectors: np.ndarray, centroids: np.ndarray, assignment: np.ndarray, k: int) -> np.ndarray:
    assignment = assignment.copy()
    counts = np.bincount(assignment, minlength=k)
    for empty in np.flatnonzero(counts == 0):
        largest = int(np.argmax(counts))
        members = np.flatnonzero(assignment == largest)
        sims = vectors[members] @ centroids[largest]
        farthest = members[int(np.argmin(sims))]
        assignment[farthest] = empty
        counts[largest] -= 1
        counts[empty] += 1
    return assignment


def _recenter(vectors: np.ndarray, assignment: np.ndarray, old: np.ndarray, k: int) -> np.ndarray:
    centroids = old.copy()
    for c in range(k):
        members = vectors[assignment == c]
        if len(members) == 0:
            continue
        mean = members.mean(axis=0)
        norm = np.linalg.norm(mean)
        if norm > 1e-12:
            centroids[c] = mean / norm
    return centroids


def sample_items(members: list[DataItem], policy: SamplingPolicy) -> list[DataItem]:
    """Seeded uniform sample without replacement under the character budget.

    Items are added until the next one would exceed the budget; the first
    sampled item is always kept (its text gets truncated at assembly time if
    it alone overruns the budget).
    """
    policy.validate()
    if not members:
        raise InputError("cannot sample from an empty member list")
    rng = random.Random(policy.seed)
    order = rng.sample(range(len(members)), len(members))
    picked = [members[order[0]]]
    used = len(members[order[0]].content)
    for idx in order[1:]:
        cost = len(members[idx].content)
        if used + cost > policy.budget:
            break
        picked.append(members[idx])
        used += cost
    return picked


class TfidfLabeler:
    """Offline labeler: top-3 TF-IDF terms of the sample, title-cased.

    TF is the term count in the (budget-capped) concatenated sample text;
    IDF is ln(N / df) over the corpus the labeler was built from.
    """

    name = "tfidf"

    def __init__(self, corpus_items: list[DataItem]):
        self.n_docs = len(corpus_items)
        self.doc_freq: Counter[str] = Counter()
        for item in corpus_items:
            self.doc_freq.update(set(tokenize(item.content)))

    def label(self, sampled: list[DataItem], budget: int = 8000) -> str:
        text = " ".join(item.content for item in sampled)[:budget]
        tf = Counter(tokenize(text))
        scored = []
        for term, count in tf.items():
            df = self.doc_freq.get(term, 0)
            idf = log(self.n_docs / df) if df > 0 else log(self.n_docs + 1)
            scored.append((-count * idf, term))
        scored.sort()
        top = [term for _, term in scored[:3]]
        return " ".join(t.title() for t in top)


def label_topic(sampled: list[DataItem], labeler, fallback=None) -> str:
    """Label a sample; a failing labeler falls back instead of failing the pipeline."""
    if not sampled:
        raise InputError("cannot label an empty sample")
    try:
        label = labeler.label(sampled)
    except Exception:
        if fallback is None:
            raise
        label = fallback.label(sampled)
    if not label:
        raise InputError("labeler produced an empty label")
    return label
