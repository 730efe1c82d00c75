#!/usr/bin/env python3
"""Scripted conversation against the offline stack, including a context edit.

Shows the retrieval -> response -> subtopic-summary loop and how adding a
subtopic to the context changes the next answer.

Usage: python scripts/demo_chat.py [--prompt "..."]
"""

import argparse
from collections import Counter

from ctxscope.bundle import BuildConfig, build_bundle
from ctxscope.chat import ChatOrchestrator, ChatSession
from ctxscope.corpus import GenConfig, generate_corpus
from ctxscope.embeddings import HashEmbeddingProvider
from ctxscope.retrieval import build_index, modify_context


def show_turn(turn, session):
    print(f"\n>>> {turn.prompt}")
    print(turn.response[:600])
    print(f"citations: {turn.citations}")
    if turn.retrieved_ids:
        print(f"retrieved {len(turn.retrieved_ids)} items into the context block")
    for summary in turn.summaries[:4]:
        print(f"  [{summary.subtopic_id}] {summary.summary[:120]}")
        print(f"      relevance: {summary.relevance_explanation}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--prompt", default="Summarize everything related to marketing")
    args = parser.parse_args()

    corpus = generate_corpus(GenConfig(seed=42, n_employees=100, n_items=1000, duplicate_name_rate=0.05))
    bundle = build_bundle(corpus, BuildConfig(k=7, seed=7))
    index = build_index(corpus.items, HashEmbeddingProvider(bundle.config.embed_dim))
    orch = ChatOrchestrator(corpus, index, bundle.subtopics)

    session = ChatSession(id="demo")
    show_turn(orch.respond(session, args.prompt), session)

    # Steer: add the largest subtopic that retrieval missed entirely.
    block_ids = set(session.context_block.item_ids())
    outside = [s for s in bundle.subtopics if not set(s.member_ids) & block_ids]
    if outside:
        target = max(outside, key=lambda s: len(s.member_ids))
        members = {s.id: s.member_ids for s in bundle.subtopics}
        session.context_block = modify_context(session.context_block, [target.id], [], members)
        print(f"\n--- dragged subtopic {target.id} ({target.label!r}, "
              f"{len(target.member_ids)} items) into the context ---")
        show_turn(orch.respond(session, f"What does the {target.label} group add?"), session)

    per_topic = Counter()
    for entry in session.context_block.entries:
        topic_id = next(t.id for t in bundle.topics if entry.item_id in set(t.member_ids))
        per_topic[topic_id] += 1
    print(f"\ncontext block spread over topics: {dict(sorted(per_topic.items()))}")


if __name__ == "__main__":
    main()
