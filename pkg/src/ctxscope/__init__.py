"""ctxscope: topic-structured context visualization and steering for RAG chat."""

__version__ = "0.1.0"

from .bundle import BuildConfig, ModelBundle, build_bundle, load_bundle, serialize_bundle
from .corpus import Corpus, DataItem, Employee, GenConfig, generate_corpus, load_corpus, serialize_corpus
from .embeddings import HashEmbeddingProvider, cosine, embed_text, hash_embed
from .retrieval import ContextBlock, RetrievalParams, build_index, hybrid_retrieve

__all__ = [
    "BuildConfig",
    "ModelBundle",
    "build_bundle",
    "load_bundle",
    "serialize_bundle",
    "Corpus",
    "DataItem",
    "Employee",
    "GenConfig",
    "generate_corpus",
    "load_corpus",
    "serialize_corpus",
    "HashEmbeddingProvider",
    "cosine",
    "embed_text",
    "hash_embed",
    "ContextBlock",
    "RetrievalParams",
    "build_index",
    "hybrid_retrieve",
]
