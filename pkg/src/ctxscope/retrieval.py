"""Hybrid retrieval (BM25 + embedding cosine) and context-block management.

Retrieval scores every item as alpha * cosine + (1 - alpha) * BM25, each
component min-max normalized over the corpus for the current query; a
component that is constant across the corpus contributes nothing. The
context block built from the first prompt of a session then stays frozen
unless the user edits it at subtopic granularity.

BM25 uses the non-negative Lucene-style IDF ln(1 + (N - df + 0.5)/(df + 0.5))
so rare-but-present terms keep a positive weight even when they occur in more
than half the corpus.
"""

from collections import Counter
from dataclasses import dataclass, field
from math import log

import numpy as np

from .corpus import Corpus, DataItem
from .embeddings import EmbeddingProvider, embed_batch, embed_text
from .errors import InputError, IntegrityError
from .text import tokenize

RETRIEVED = "retrieved"
USER_ADDED = "user_added"

CONTEXT_SENTINEL = "[[item {item_id}]]"


@dataclass(frozen=True)
class RetrievalParams:
    alpha: float = 0.5  # weight of the embedding component
    top_n: int = 50
    bm25_k1: float = 1.2
    bm25_b: float = 0.75

    def validate(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise InputError(f"alpha must be in [0,1], got {self.alpha}")
        if self.top_n < 1:
            raise InputError(f"top_n must be >= 1, got {self.top_n}")


@dataclass
class CorpusIndex:
    item_ids: list[str]
    postings: dict[str, list[tuple[int, int]]]  # token -> [(doc index, tf)]
    doc_lengths: np.ndarray
    avg_doc_length: float
    embeddings: np.ndarray  # (n, D) unit rows, aligned with item_ids
    provider: EmbeddingProvider
    index_of: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.index_of = {item_id: i for i, item_id in enumerate(self.item_ids)}

    @property
    def n_docs(self) -> int:
        return len(self.item_ids)

    def doc_freq(self, token: str) -> int:
        return len(self.postings.get(token, ()))


def build_index(items: list[DataItem], provider: EmbeddingProvider) -> CorpusIndex:
    """Index item content for BM25 and embed it for the semantic component."""
    if not items:
        raise InputError("cannot index an empty corpus")
    postings: dict[str, list[tuple[int, int]]] = {}
    lengths = np.zeros(len(items), dtype=np.float64)
    for i, item in enumerate(items):
        tokens = tokenize(item.content)
        lengths[i] = len(tokens)
        for token, tf in sorted(Counter(tokens).items()):
            postings.setdefault(token, []).append((i, tf))
    avg_len = float(lengths.mean())
    if avg_len <= 0:
        raise InputError("corpus has no indexable tokens")
    embeddings = embed_batch(provider, [item.content for item in items])
    return CorpusIndex(
        item_ids=[item.id for item in items],
        postings=postings,
        doc_lengths=lengths,
        avg_doc_length=avg_len,
        embeddings=embeddings,
        provider=provider,
    )


def _idf(index: CorpusIndex, token: str) -> float:
    df = index.doc_freq(token)
    if df == 0:
        return 0.0
    return max(0.0, log(1.0 + (index.n_docs - df + 0.5) / (df + 0.5)))


def bm25_scores(query_tokens: list[str], index: CorpusIndex, k1: float = 1.2, b: float = 0.75) -> np.ndarray:
    """BM25 scores for every document, in index order."""
    scores = np.zeros(index.n_docs, dtype=np.float64)
    norm = k1 * (1.0 - b + b * index.doc_lengths / index.avg_doc_length)
    for token in query_tokens:
        idf = _idf(index, token)
        if idf == 0.0:
            continue
        for doc, tf in index.postings[token]:
            scores[doc] += idf * tf * (k1 + 1.0) / (tf + norm[doc])
    return scores


def bm25_score(query_tokens: list[str], item_id: str, index: CorpusIndex,
               k1: float = 1.2, b: float = 0.75) -> float:
    if item_id not in index.index_of:
        raise InputError(f"item '{item_id}' is not in the index")
    return float(bm25_scores(query_tokens, index, k1, b)[index.index_of[item_id]])


def _minmax(scores: np.ndarray) -> np.ndarray:
    lo, hi = float(scores.min()), float(scores.max())
    if hi == lo:
        return np.zeros_like(scores)
    return (scores - lo) / (hi - lo)


def hybrid_retrieve(prompt: str, index: CorpusIndex, params: RetrievalParams) -> list[tuple[str, float]]:
    """Rank the corpus for a prompt; descending score, ties by item id.

    Scores are quantized to 12 decimals before sorting: items whose true
    scores coincide can differ by a last-bit rounding depending on summation
    order, and the tie-break by id must see them as equal for the total order
    to be reproducible.
    """
    params.validate()
    if not prompt or not prompt.strip():
        raise InputError("prompt must be non-empty")
    query_tokens = tokenize(prompt)
    query_vec = embed_text(index.provider, prompt)
    sem = _minmax(index.embeddings @ query_vec)
    kw = _minmax(bm25_scores(query_tokens, index, params.bm25_k1, params.bm25_b))
    combined = np.round(params.alpha * sem + (1.0 - params.alpha) * kw, 12)
    ranked = sorted(range(index.n_docs), key=lambda i: (-combined[i], index.item_ids[i]))
    return [(index.item_ids[i], float(combined[i])) for i in ranked[: params.top_n]]


@dataclass(frozen=True)
class ContextEntry:
    item_id: str
    origin: str  # RETRIEVED or USER_ADDED


@dataclass(frozen=True)
class ContextBlock:
    entries: tuple[ContextEntry, ...]
    created_from_prompt: str

    def item_ids(self) -> list[str]:
        return [e.item_id for e in self.entries]


def build_context_block(prompt: str, index: CorpusIndex, params: RetrievalParams) -> ContextBlock:
    """Initial context for a session: retrieval results in rank order."""
    ranked = hybrid_retrieve(prompt, index, params)
    return ContextBlock(
        entries=tuple(ContextEntry(item_id, RETRIEVED) for item_id, _ in ranked),
        created_from_prompt=prompt,
    )


def modify_context(
    block: ContextBlock,
    add_subtopic_ids: list[str],
    remove_subtopic_ids: list[str],
    subtopic_members: dict[str, list[str]],
) -> ContextBlock:
    """Group-level edit: removals first, then additions of absent members.

    Removal-before-addition means a subtopic present in both lists ends up in
    the block, which is what dragging a just-removed group back in should do.
    """
    unknown = sorted(set(add_subtopic_ids + remove_subtopic_ids) - set(subtopic_members))
    if unknown:
        raise InputError(f"unknown subtopic ids: {', '.join(unknown)}")
    removed: set[str] = set()
    for sid in remove_subtopic_ids:
        removed.update(subtopic_members[sid])
    entries = [e for e in block.entries if e.item_id not in removed]
    present = {e.item_id for e in entries}
    for sid in add_subtopic_ids:
        for item_id in subtopic_members[sid]:
            if item_id not in present:
                entries.append(ContextEntry(item_id, USER_ADDED))
                present.add(item_id)
    return ContextBlock(entries=tuple(entries), created_from_prompt=block.created_from_prompt)


def _participant_names(item: DataItem, corpus: Corpus) -> list[str]:
    names = []
    for pid in item.participants:
        emp = corpus.employees_by_id.get(pid)
        if emp is None:
            raise IntegrityError(f"item '{item.id}' references unknown employee '{pid}'")
        names.append(emp.full_name)
    return names


def render_context_text(block: ContextBlock, corpus: Corpus) -> str:
    """Flatten the block into the prompt-ready text, one sentinel line per item.

    Sentinels let response citations point back at item ids.
    """
    sections = []
    for entry in block.entries:
        item = corpus.items_by_id.get(entry.item_id)
        if item is None:
            raise IntegrityError(f"context references unknown item '{entry.item_id}'")
        names = _participant_names(item, corpus)
        if item.kind == "email":
            sender = names[0]
            recipients = ", ".join(names[1:]) if len(names) > 1 else sender
            body = f"EMAIL from {sender} to {recipients} | {item.title} | {item.content}"
        elif item.kind == "file":
            body = f"FILE | {item.title} | {item.content}"
        elif item.kind == "calendar_event":
            body = f"EVENT | {item.created_at} | {', '.join(names)} | {item.content}"
        else:
            body = f"CHAT from {names[0]} | {item.content}"
        sections.append(f"{CONTEXT_SENTINEL.format(item_id=item.id)}\n{body}")
    return "\n".join(sections)
