"""Pipeline composition and the persisted model bundle.

``build_bundle`` runs embed -> topic clustering -> labeling -> per-topic
kernel PCA -> per-topic HDBSCAN -> subtopic assembly -> treemap layout, and
packages the result with the corpus fingerprint and the build config. The
bundle is canonical JSON (sorted keys, fixed indent) so identical inputs
produce byte-identical files; raw embeddings are not persisted because the
offline provider regenerates them exactly.
"""

import json
from dataclasses import asdict, dataclass
from hashlib import blake2b, sha256

import numpy as np

from .corpus import Corpus, serialize_corpus
from .density import HdbscanParams, Subtopic, collect_subtopics, hdbscan
from .embeddings import DEFAULT_DIM, HashEmbeddingProvider, embed_batch
from .errors import BuildError, ConfigError, IntegrityError, ParseError
from .layout import CellRect, ItemPlacement, LayoutModel, TopicGeometry, build_layout
from .projection import ProjectionModel, fit_kernel_pca
from .text import tokenize
from .topics import SamplingPolicy, TfidfLabeler, Topic, cluster_topics, label_topic, sample_items

BUNDLE_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class BuildConfig:
    k: int = 7
    seed: int = 0
    embed_dim: int = DEFAULT_DIM
    embed_provider: str = "hash-v1"
    max_iters: int = 100
    label_budget: int = 8000
    min_cluster_size: int = 5
    min_samples: int = 5

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.embed_dim < 8:
            raise ConfigError(f"embed_dim must be >= 8, got {self.embed_dim}")
        if self.max_iters < 1 or self.label_budget < 1:
            raise ConfigError("max_iters and label_budget must be positive")
        HdbscanParams(self.min_cluster_size, self.min_samples).validate()


def resolve_embedding_provider(name: str, dim: int):
    """Map a build-config provider name to a provider instance.

    Only the offline hash provider is deterministic; the remote one needs an
    API key in the environment and is never used by tests.
    """
    if name == "hash-v1":
        return HashEmbeddingProvider(dim)
    if name == "remote":
        from .remote import RemoteEmbeddingProvider

        return RemoteEmbeddingProvider(dimension=dim)
    raise ConfigError(f"unknown embedding provider '{name}'")


@dataclass
class ModelBundle:
    schema_version: int
    corpus_fingerprint: str
    config: BuildConfig
    topics: list[Topic]
    subtopics: list[Subtopic]
    projections: dict[int, ProjectionModel]
    layout: LayoutModel
    index_stats: dict


def corpus_fingerprint(corpus: Corpus) -> str:
    return "sha256:" + sha256(serialize_corpus(corpus)).hexdigest()


def derive_seed(seed: int, *tags) -> int:
    """Independent deterministic seed stream for a tagged pipeline stage."""
    payload = repr((seed,) + tags).encode("utf-8")
    return int.from_bytes(blake2b(payload, digest_size=8).digest(), "big")


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, BuildError):
                raise BuildError(name, exc) from exc
            return False

    return _Ctx()


def topic_geometries(
    topics: list[Topic], subtopics: list[Subtopic], projections: dict[int, ProjectionModel]
) -> list[TopicGeometry]:
    """Assemble the layout inputs from pipeline outputs."""
    subtopic_of: dict[str, str] = {}
    for sub in subtopics:
        for item_id in sub.member_ids:
            subtopic_of[item_id] = sub.id
    geometries = []
    for topic in topics:
        coords = projections[topic.id].coords
        items = tuple(
            (item_id, subtopic_of[item_id], coords[item_id][0], coords[item_id][1])
            for item_id in topic.member_ids
        )
        geometries.append(TopicGeometry(topic_id=topic.id, items=items))
    return geometries


def build_bundle(corpus: Corpus, config: BuildConfig) -> ModelBundle:
    """Run the full preprocessing pipeline; deterministic under a fixed config."""
    config.validate()
    provider = resolve_embedding_provider(config.embed_provider, config.embed_dim)
    items = corpus.items

    with _stage("embed"):
        if not items:
            raise ConfigError("corpus has no items")
        embeddings = embed_batch(provider, [item.content for item in items])

    with _stage("cluster_topics"):
        assignment = cluster_topics(embeddings, config.k, config.seed, config.max_iters)

    with _stage("label_topics"):
        labeler = TfidfLabeler(items)
        topics = []
        for topic_id in range(config.k):
            member_idx = [i for i in range(len(items)) if assignment[i] == topic_id]
            member_ids = sorted(items[i].id for i in member_idx)
            centroid = embeddings[member_idx].mean(axis=0)
            centroid = centroid / np.linalg.norm(centroid)
            policy = SamplingPolicy(config.label_budget, derive_seed(config.seed, "topic-label", topic_id))
            sampled = sample_items([corpus.items_by_id[i] for i in member_ids], policy)
            topics.append(Topic(
                id=topic_id,
                label=label_topic(sampled, labeler),
                member_ids=member_ids,
                centroid=centroid,
            ))

    with _stage("fit_kernel_pca"):
        index_of = {item.id: i for i, item in enumerate(items)}
        projections = {}
        for topic in topics:
            rows = embeddings[[index_of[i] for i in topic.member_ids]]
            projections[topic.id] = fit_kernel_pca(topic.id, topic.member_ids, rows)

    with _stage("subtopics"):
        params = HdbscanParams(config.min_cluster_size, config.min_samples)
        subtopics: list[Subtopic] = []
        for topic in topics:
            coords = projections[topic.id].coords
            points = np.array([coords[i] for i in topic.member_ids], dtype=np.float64)
            labels = hdbscan(points, params)

            def label_for(ids: list[str], _topic=topic) -> str:
                policy = SamplingPolicy(
                    config.label_budget, derive_seed(config.seed, "subtopic-label", _topic.id, ids[0])
                )
                sampled = sample_items([corpus.items_by_id[i] for i in ids], policy)
                return label_topic(sampled, labeler)

            subtopics.extend(collect_subtopics(topic.id, topic.member_ids, labels, label_for))

    with _stage("layout"):
        layout = build_layout(topic_geometries(topics, subtopics, projections))

    with _stage("index_stats"):
        lengths = [len(tokenize(item.content)) for item in items]
        vocab = set()
        for item in items:
            vocab.update(tokenize(item.content))
        index_stats = {
            "n_items": len(items),
            "avg_doc_length": sum(lengths) / len(lengths),
            "vocab_size": len(vocab),
        }

    return ModelBundle(
        schema_version=BUNDLE_SCHEMA_VERSION,
        corpus_fingerprint=corpus_fingerprint(corpus),
        config=config,
        topics=topics,
        subtopics=subtopics,
        projections=projections,
        layout=layout,
        index_stats=index_stats,
    )


def bundle_to_dict(bundle: ModelBundle) -> dict:
    return {
        "schema_version": bundle.schema_version,
        "corpus_fingerprint": bundle.corpus_fingerprint,
        "config": asdict(bundle.config),
        "topics": [
            {
                "id": t.id,
                "label": t.label,
                "member_ids": t.member_ids,
                "centroid": [float(v) for v in t.centroid],
            }
            for t in bundle.topics
        ],
        "subtopics": [asdict(s) for s in bundle.subtopics],
        "projections": {
            str(topic_id): {
                "topic_id": p.topic_id,
                "training_ids": p.training_ids,
                "kernel_row_means": [float(v) for v in p.kernel_row_means],
                "kernel_grand_mean": p.kernel_grand_mean,
                "eigenvalues": [float(v) for v in p.eigenvalues],
                "eigenvectors": [[float(v) for v in row] for row in p.eigenvectors],
                "coords": {i: [c[0], c[1]] for i, c in p.coords.items()},
            }
            for topic_id, p in bundle.projections.items()
        },
        "layout": layout_to_dict(bundle.layout),
        "index_stats": bundle.index_stats,
    }


def layout_to_dict(layout: LayoutModel) -> dict:
    return {
        "cells": [asdict(c) for c in layout.cells],
        "placements": [asdict(p) for p in layout.placements],
        "expanded_topic": layout.expanded_topic,
    }


def serialize_bundle(bundle: ModelBundle) -> bytes:
    doc = bundle_to_dict(bundle)
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n").encode("utf-8")


def _layout_from_dict(doc: dict) -> LayoutModel:
    return LayoutModel(
        cells=tuple(CellRect(**c) for c in doc["cells"]),
        placements=tuple(ItemPlacement(**p) for p in doc["placements"]),
        expanded_topic=doc["expanded_topic"],
    )


def load_bundle(data: bytes) -> ModelBundle:
    """Parse a serialized bundle; projection training matrices stay detached
    until ``attach_runtime`` re-embeds the corpus."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        location = f"line {exc.lineno} column {exc.colno}" if isinstance(exc, json.JSONDecodeError) else "bytes"
        raise ParseError(f"bundle is not valid JSON: {getattr(exc, 'msg', exc)}", location) from exc
    try:
        if doc["schema_version"] != BUNDLE_SCHEMA_VERSION:
            raise ParseError(f"unsupported bundle schema_version {doc['schema_version']}", "document root")
        topics = [
            Topic(
                id=t["id"],
                label=t["label"],
                member_ids=list(t["member_ids"]),
                centroid=np.array(t["centroid"], dtype=np.float64),
            )
            for t in doc["topics"]
        ]
        subtopics = [Subtopic(**s) for s in doc["subtopics"]]
        projections = {}
        for key, p in doc["projections"].items():
            projections[int(key)] = ProjectionModel(
                topic_id=p["topic_id"],
                training_ids=list(p["training_ids"]),
                kernel_row_means=np.array(p["kernel_row_means"], dtype=np.float64),
                kernel_grand_mean=float(p["kernel_grand_mean"]),
                eigenvalues=np.array(p["eigenvalues"], dtype=np.float64),
                eigenvectors=np.array(p["eigenvectors"], dtype=np.float64),
                coords={i: (c[0], c[1]) for i, c in p["coords"].items()},
            )
        return ModelBundle(
            schema_version=doc["schema_version"],
            corpus_fingerprint=doc["corpus_fingerprint"],
            config=BuildConfig(**doc["config"]),
            topics=topics,
            subtopics=subtopics,
            projections=projections,
            layout=_layout_from_dict(doc["layout"]),
            index_stats=doc["index_stats"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bundle structure invalid: {exc!r}", "document body") from exc


def validate_bundle(bundle: ModelBundle, corpus: Corpus) -> None:
    """Self-consistency and corpus-match checks run before serving."""
    if bundle.corpus_fingerprint != corpus_fingerprint(corpus):
        raise IntegrityError("bundle fingerprint does not match the corpus")
    corpus_ids = set(corpus.items_by_id)
    topic_members: set[str] = set()
    for topic in bundle.topics:
        member_set = set(topic.member_ids)
        if not member_set <= corpus_ids:
            raise IntegrityError(f"topic {topic.id} references items outside the corpus")
        if topic_members & member_set:
            raise IntegrityError("topics overlap")
        topic_members |= member_set
    if topic_members != corpus_ids:
        raise IntegrityError("topics do not cover the corpus")
    for sub in bundle.subtopics:
        if not set(sub.member_ids) <= topic_members:
            raise IntegrityError(f"subtopic {sub.id} references unknown items")
    placed = {p.item_id for p in bundle.layout.placements}
    if placed != corpus_ids:
        raise IntegrityError("layout placements do not cover the corpus")


def attach_runtime(bundle: ModelBundle, corpus: Corpus) -> None:
    """Re-embed training items so Nystrom projection works after a load."""
    provider = resolve_embedding_provider(bundle.config.embed_provider, bundle.config.embed_dim)
    for model in bundle.projections.values():
        if model.training is None:
            items = [corpus.items_by_id[i] for i in model.training_ids]
            model.training = embed_batch(provider, [item.content for item in items])
