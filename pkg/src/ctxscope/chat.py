"""Conversation turns over a frozen context block, with per-subtopic summaries.

The offline response provider is extractive: it pulls the context sentences
with the highest query-token overlap and cites their item ids, so every claim
in a stub response is traceable and the whole turn is deterministic. Subtopic
summaries are likewise extractive (top TF-IDF sentences of a budget-capped
sample) with a relevance note listing which prompt terms actually occur in
the group.
"""

import re
from collections import Counter
from dataclasses import dataclass, field
from math import log
from typing import Callable, Optional

from .corpus import Corpus, DataItem
from .density import Subtopic
from .errors import InputError, NotFoundError, ProviderError
from .retrieval import (
    RETRIEVED,
    ContextBlock,
    CorpusIndex,
    RetrievalParams,
    build_context_block,
    render_context_text,
)
from .text import split_sentences, tokenize
from .topics import SamplingPolicy, sample_items

_SENTINEL_RE = re.compile(r"^\[\[item (?P<id>\S+)\]\]$")

# (prompt, rendered context) -> (response, citations)
ResponseProvider = Callable[[str, str], tuple[str, list[str]]]


@dataclass
class SubtopicSummary:
    subtopic_id: str
    summary: str
    relevance_explanation: str
    covered_item_ids: list[str]


@dataclass
class ChatTurn:
    prompt: str
    response: str
    citations: list[str]
    retrieved_ids: list[str]  # non-empty on the first turn only
    summaries: list[SubtopicSummary]


@dataclass
class ChatSession:
    id: str
    system_prompt: str = "You are an enterprise assistant answering from the provided context."
    turns: list[ChatTurn] = field(default_factory=list)
    context_block: Optional[ContextBlock] = None


def stub_respond(prompt: str, rendered_context: str) -> tuple[str, list[str]]:
    """Extractive offline responder.

    Scores every context sentence by summed query-token counts and returns
    the top five in context order, each suffixed with its item-id citation.
    """
    query = Counter(tokenize(prompt))
    scored: list[tuple[int, int, str, str]] = []  # (score, seq, sentence, item_id)
    current_id = None
    seq = 0
    for line in rendered_context.splitlines():
        match = _SENTINEL_RE.match(line)
        if match:
            current_id = match.group("id")
            continue
        if current_id is None:
            continue
        for sentence in split_sentences(line):
            counts = Counter(tokenize(sentence))
            score = sum(count for tok, count in counts.items() if tok in query)
            if score > 0:
                scored.append((score, seq, sentence, current_id))
            seq += 1
    if not scored:
        return "No relevant context found for this prompt.", []
    top = sorted(scored, key=lambda s: (-s[0], s[1]))[:5]
    top.sort(key=lambda s: s[1])  # back to context order
    response = " ".join(f"{sentence} [{item_id}]" for _, _, sentence, item_id in top)
    citations = []
    for _, _, _, item_id in top:
        if item_id not in citations:
            citations.append(item_id)
    return response, citations


def summarize_subtopic(
    subtopic: Subtopic,
    block: ContextBlock,
    prompt: str,
    corpus: Corpus,
    index: CorpusIndex,
    policy: SamplingPolicy,
) -> SubtopicSummary:
    """Extractive summary of the subtopic's in-context members."""
    block_ids = set(block.item_ids())
    member_ids = [i for i in subtopic.member_ids if i in block_ids]
    if not member_ids:
        raise InputError(f"subtopic {subtopic.id} has no members in the context block")
    members = [corpus.items_by_id[i] for i in member_ids]
    sampled = sample_items(members, policy)
    covered = [item.id for item in sampled]

    text = " ".join(item.content for item in sampled)[: policy.budget]
    tf = Counter(tokenize(text))
    n_docs = index.n_docs

    def sentence_score(sentence: str) -> float:
        tokens = set(tokenize(sentence))
        total = 0.0
        for tok in tokens:
            df = index.doc_freq(tok)
            idf = log(n_docs / df) if df > 0 else 0.0
            total += tf[tok] * idf
        return total

    sentences = split_sentences(text)
    ranked = sorted(enumerate(sentences), key=lambda kv: (-sentence_score(kv[1]), kv[0]))[:3]
    ranked.sort(key=lambda kv: kv[0])
    summary = " ".join(s for _, s in ranked) if ranked else text[:200]

    prompt_tokens = sorted(set(tokenize(prompt)))
    found = [tok for tok in prompt_tokens if tf.get(tok, 0) > 0]
    # Tokens occurring in more than half the corpus say nothing about why
    # this group is relevant, so they are not worth listing.
    informative = [tok for tok in found if index.doc_freq(tok) <= n_docs / 2]
    if informative:
        explanation = f"Contains the prompt terms: {', '.join(informative)}."
    elif found:
        explanation = "Overlaps the prompt only on common words; included via retrieval similarity."
    else:
        explanation = "No direct overlap with prompt terms; included via retrieval similarity."
    return SubtopicSummary(
        subtopic_id=subtopic.id,
        summary=summary,
        relevance_explanation=explanation,
        covered_item_ids=covered,
    )


def get_file_view(item_id: str, corpus: Corpus) -> dict:
    """Full item record with expanded participant employee records.

    Employees sharing a name stay distinct records; the content is returned
    untransformed.
    """
    item = corpus.items_by_id.get(item_id)
    if item is None:
        raise NotFoundError(f"unknown item '{item_id}'")
    participants = []
    for pid in item.participants:
        emp = corpus.employees_by_id[pid]
        participants.append({
            "id": emp.id,
            "full_name": emp.full_name,
            "title": emp.title,
            "department": emp.department,
        })
    return {
        "id": item.id,
        "kind": item.kind,
        "title": item.title,
        "content": item.content,
        "created_at": item.created_at,
        "participants": participants,
    }


def _subtopic_sort_key(subtopic_id: str) -> tuple[int, int]:
    topic, sub = subtopic_id.split(".")
    return int(topic), int(sub)


class ChatOrchestrator:
    """Owns sessions and runs turns against a fixed model and corpus."""

    def __init__(
        self,
        corpus: Corpus,
        index: CorpusIndex,
        subtopics: list[Subtopic],
        responder: ResponseProvider = stub_respond,
        retrieval_params: RetrievalParams = RetrievalParams(),
        policy: SamplingPolicy = SamplingPolicy(),
    ):
        self.corpus = corpus
        self.index = index
        self.subtopics = sorted(subtopics, key=lambda s: _subtopic_sort_key(s.id))
        self.responder = responder
        self.retrieval_params = retrieval_params
        self.policy = policy
        self._summary_cache: dict[tuple, SubtopicSummary] = {}

    def respond(self, session: ChatSession, prompt: str) -> ChatTurn:
        """Run one turn; the session is left untouched if the provider fails."""
        if not prompt or not prompt.strip():
            raise InputError("prompt must be non-empty")
        if session.context_block is None:
            block = build_context_block(prompt, self.index, self.retrieval_params)
            retrieved_ids = [e.item_id for e in block.entries if e.origin == RETRIEVED]
        else:
            block = session.context_block
            retrieved_ids = []
        rendered = render_context_text(block, self.corpus)
        try:
            response, citations = self.responder(prompt, rendered)
        except ProviderError:
            raise
        except Exception as exc:
            raise ProviderError("responder", str(exc)) from exc

        block_ids = set(block.item_ids())
        bad = [c for c in citations if c not in block_ids]
        if bad:
            raise ProviderError("responder", f"citations outside the context block: {bad}")

        summaries = []
        cache_key_base = (tuple(block.item_ids()), prompt)
        for subtopic in self.subtopics:
            if not block_ids.intersection(subtopic.member_ids):
                continue
            key = cache_key_base + (subtopic.id,)
            if key not in self._summary_cache:
                self._summary_cache[key] = summarize_subtopic(
                    subtopic, block, prompt, self.corpus, self.index, self.policy
                )
            summaries.append(self._summary_cache[key])

        turn = ChatTurn(
            prompt=prompt,
            response=response,
            citations=citations,
            retrieved_ids=retrieved_ids,
            summaries=summaries,
        )
        session.context_block = block
        session.turns.append(turn)
        return turn
