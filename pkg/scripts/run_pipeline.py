#!/usr/bin/env python3
"""End-to-end pipeline experiment: generate a corpus, build the bundle,
and print the recovered topic/subtopic structure plus layout stats.

Usage: python scripts/run_pipeline.py [--seed 42] [--employees 100] [--items 1000]
"""

import argparse
import time
from collections import Counter

from ctxscope.bundle import BuildConfig, build_bundle, serialize_bundle
from ctxscope.corpus import DEPARTMENT_TERMS, GenConfig, generate_corpus
from ctxscope.text import tokenize


def dominant_pool(item):
    tokens = set(tokenize(item.content))
    return max(DEPARTMENT_TERMS, key=lambda d: len(tokens & set(DEPARTMENT_TERMS[d])))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--employees", type=int, default=100)
    parser.add_argument("--items", type=int, default=1000)
    parser.add_argument("--dup-rate", type=float, default=0.05)
    parser.add_argument("--k", type=int, default=7)
    parser.add_argument("--build-seed", type=int, default=7)
    args = parser.parse_args()

    t0 = time.monotonic()
    corpus = generate_corpus(GenConfig(
        seed=args.seed, n_employees=args.employees, n_items=args.items,
        duplicate_name_rate=args.dup_rate,
    ))
    t1 = time.monotonic()
    bundle = build_bundle(corpus, BuildConfig(k=args.k, seed=args.build_seed))
    t2 = time.monotonic()

    print(f"gen: {t1 - t0:.2f}s   build: {t2 - t1:.2f}s   "
          f"bundle: {len(serialize_bundle(bundle)) / 1024:.0f} KiB")
    print(f"\n{'topic':>5}  {'n':>4}  {'label':<34} dominant pool (purity)")
    for topic in bundle.topics:
        pools = Counter(dominant_pool(corpus.items_by_id[i]) for i in topic.member_ids)
        pool, count = pools.most_common(1)[0]
        print(f"{topic.id:>5}  {len(topic.member_ids):>4}  {topic.label:<34} "
              f"{pool} ({count / len(topic.member_ids):.0%})")
        for sub in bundle.subtopics:
            if sub.id.startswith(f"{topic.id}."):
                tag = " [noise]" if sub.is_noise_bucket else ""
                print(f"{'':>12}{sub.id:<6} {len(sub.member_ids):>4}  {sub.label}{tag}")

    cells = {c.topic_id: c for c in bundle.layout.cells}
    print("\nlayout:")
    for topic_id, cell in sorted(cells.items()):
        print(f"  topic {topic_id}: cell {cell.w:.3f}x{cell.h:.3f} at ({cell.x:.3f}, {cell.y:.3f})")

    names = Counter(e.full_name for e in corpus.employees)
    dups = [n for n, c in names.items() if c > 1]
    print(f"\nplanted duplicate names: {sorted(dups)}")


if __name__ == "__main__":
    main()
