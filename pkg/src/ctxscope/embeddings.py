"""Embedding providers and cosine similarity.

The default provider is offline signed feature hashing: each lowercase token
is hashed with keyed blake2b (key ``HASH_KEY``, so the mapping is stable
across platforms and Python versions) to a bucket in ``[0, dim)`` and a sign
in {-1, +1}; token contributions accumulate and the vector is L2-normalized.
Texts sharing more tokens therefore have higher cosine, which is the only
embedding property the downstream pipeline relies on.

A remote provider (e.g. a hosted embedding API) is admissible behind the same
interface but is never used by tests; see `ctxscope.remote`.
"""

from dataclasses import dataclass
from hashlib import blake2b
from typing import Protocol

import numpy as np

from .errors import InputError, UndefinedSimilarityError
from .text import tokenize

# Keyed hash seed for the offline provider; changing it changes every vector.
HASH_KEY = b"ctxscope-hash-embed-v1"

DEFAULT_DIM = 256


class EmbeddingProvider(Protocol):
    name: str
    dimension: int

    def embed(self, text: str) -> np.ndarray: ...


def _token_hash(token: str) -> int:
    return int.from_bytes(blake2b(token.encode("utf-8"), digest_size=8, key=HASH_KEY).digest(), "big")


def hash_embed(text: str, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Signed feature-hashing embedding, unit-normalized, bag-of-words.

    Raises InputError for empty or token-less text and for dim < 8.
    """
    if dim < 8:
        raise InputError(f"embedding dimension must be >= 8, got {dim}")
    tokens = tokenize(text)
    if not tokens:
        raise InputError("cannot embed empty text")
    vec = np.zeros(dim, dtype=np.float64)
    for tok in tokens:
        h = _token_hash(tok)
        bucket = h % dim
        sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
        vec[bucket] += sign
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        # Signed collisions cancelled everything; salt with the token count
        # bucket so the vector stays deterministic and non-zero.
        vec[len(tokens) % dim] = 1.0
        norm = 1.0
    return vec / norm


@dataclass(frozen=True)
class HashEmbeddingProvider:
    """Deterministic offline provider; stateless and thread-safe."""

    dimension: int = DEFAULT_DIM
    name: str = "hash-v1"

    def embed(self, text: str) -> np.ndarray:
        return hash_embed(text, self.dimension)


def embed_text(provider: EmbeddingProvider, text: str) -> np.ndarray:
    """Embed one text through a provider; result is unit-normalized."""
    if not text or not text.strip():
        raise InputError("cannot embed empty text")
    vec = np.asarray(provider.embed(text), dtype=np.float64)
    if vec.shape != (provider.dimension,):
        raise InputError(
            f"provider '{provider.name}' returned shape {vec.shape}, expected ({provider.dimension},)"
        )
    if not np.all(np.isfinite(vec)):
        raise InputError(f"provider '{provider.name}' returned non-finite values")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise UndefinedSimilarityError("provider returned a zero vector")
    return vec / norm


def embed_batch(provider: EmbeddingProvider, texts: list[str]) -> np.ndarray:
    """Embed texts in order; row i corresponds to texts[i]."""
    return np.vstack([embed_text(provider, t) for t in texts])


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """cos(u, v) = dot / (|u||v|), in [-1, 1]. Zero vectors are undefined."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise InputError(f"dimension mismatch: {u.shape} vs {v.shape}")
    # Rescale by the largest component first: squaring entries of a very
    # small (or very large) vector under/overflows and wrecks the ratio,
    # while cosine itself is scale-invariant.
    su = float(np.max(np.abs(u)))
    sv = float(np.max(np.abs(v)))
    if su == 0.0 or sv == 0.0:
        raise UndefinedSimilarityError("cosine of a zero vector is undefined")
    u = u / su
    v = v / sv
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))
