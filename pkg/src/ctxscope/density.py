"""HDBSCAN over 2D projected coordinates, plus subtopic assembly.

Full pipeline, no shortcuts: per-point core distances (Euclidean distance to
the min_samples-th nearest other point), mutual reachability
m(a, b) = max(core_a, core_b, d(a, b)), an exact Prim MST over the complete
mutual-reachability graph, single-linkage merging in ascending edge order,
condensation against min_cluster_size, and cluster extraction by
excess-of-mass stability. Stability ties go to the leaves (finer clusters).

One deliberate deviation from common library behavior: the condensed-tree
root competes in the stability selection, so a dataset with no internal
density structure comes back as one cluster instead of all-noise. Points in
clusters smaller than min_cluster_size end up as NOISE (-1); the treemap
pipeline folds those into a visible "Other" bucket per topic.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import InputError

NOISE = -1

# Lambda (1/distance) assigned to zero-distance merges; finite so stability
# sums stay comparable.
LAMBDA_CAP = 1e18


@dataclass(frozen=True)
class HdbscanParams:
    min_cluster_size: int = 5
    min_samples: int = 5

    def validate(self) -> None:
        if self.min_cluster_size < 2 or self.min_samples < 2:
            raise InputError(
                f"min_cluster_size and min_samples must be >= 2, got "
                f"{self.min_cluster_size}/{self.min_samples}"
            )


@dataclass
class Subtopic:
    id: str  # "topicId.subIndex"
    label: str
    member_ids: list[str]  # sorted
    is_noise_bucket: bool = False


class CondensedRow(NamedTuple):
    parent: int  # condensed cluster id
    child: int  # condensed cluster id if child_is_cluster else point index
    child_is_cluster: bool
    lam: float
    size: int


def _pairwise(points: np.ndarray) -> np.ndarray:
    diffs = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diffs * diffs, axis=2))


def _core_from_dist(dist: np.ndarray, min_samples: int) -> np.ndarray:
    order = np.sort(dist, axis=1)  # column 0 is the self-distance 0
    k = min(min_samples, len(dist) - 1)
    return order[:, k]


def core_distances(points: np.ndarray, min_samples: int) -> np.ndarray:
    """Distance to the min_samples-th nearest neighbor (self excluded),
    clamped to the farthest point when fewer neighbors exist."""
    return _core_from_dist(_pairwise(points), min_samples)


def mutual_reachability(points: np.ndarray, min_samples: int) -> np.ndarray:
    dist = _pairwise(points)
    core = _core_from_dist(dist, min_samples)
    reach = np.maximum(dist, np.maximum(core[:, None], core[None, :]))
    np.fill_diagonal(reach, 0.0)
    return reach


def mst_edges(weights: np.ndarray) -> list[tuple[float, int, int]]:
    """Prim's algorithm on a dense symmetric weight matrix; ties by index."""
    n = weights.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = weights[0].copy()
    best_from = np.zeros(n, dtype=np.int64)
    edges = []
    for _ in range(n - 1):
        candidates = np.where(in_tree, np.inf, best)
        nxt = int(np.argmin(candidates))
        edges.append((float(best[nxt]), int(min(best_from[nxt], nxt)), int(max(best_from[nxt], nxt))))
        in_tree[nxt] = True
        closer = weights[nxt] < best
        best_from = np.where(closer, nxt, best_from)
        best = np.minimum(best, weights[nxt])
    return edges


def single_linkage(edges: list[tuple[float, int, int]], n: int) -> list[tuple[int, int, float, int]]:
    """Merge components in ascending edge order.

    Returns rows (node_a, node_b, distance, merged_size); leaves are nodes
    0..n-1 and merge i creates node n+i, mirroring the usual linkage layout.
    """
    parent = list(range(2 * n - 1))
    size = [1] * n + [0] * (n - 1)
    component = list(range(n))  # current top node of each union-find root

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = []
    next_node = n
    for dist, u, v in sorted(edges):
        ru, rv = find(u), find(v)
        na, nb = component[ru], component[rv]
        merged = size[na] + size[nb]
        merges.append((na, nb, dist, merged))
        size[next_node] = merged
        parent[ru] = rv
        component[find(rv)] = next_node
        next_node += 1
    return merges


def _lambda_of(distance: float) -> float:
    return 1.0 / distance if distance > 0.0 else LAMBDA_CAP


def condense_tree(
    merges: list[tuple[int, int, float, int]], n: int, min_cluster_size: int
) -> list[CondensedRow]:
    """Collapse the single-linkage dendrogram against min_cluster_size.

    A split survives only if both sides hold at least min_cluster_size
    points; otherwise the small side's points fall out of the parent cluster
    at the split's lambda. The root condensed cluster has id 0.
    """
    children = {n + i: (m[0], m[1], m[2]) for i, m in enumerate(merges)}
    sizes = {n + i: m[3] for i, m in enumerate(merges)}
    for p in range(n):
        sizes[p] = 1

    def leaves(node: int) -> list[int]:
        out, stack = [], [node]
        while stack:
            x = stack.pop()
            if x < n:
                out.append(x)
            else:
                left, right, _ = children[x]
                stack.extend((left, right))
        return out

    rows: list[CondensedRow] = []
    if not merges:
        return rows
    root = n + len(merges) - 1
    next_label = 1
    stack = [(root, 0)]
    while stack:
        node, label = stack.pop()
        left, right, dist = children[node]
        lam = _lambda_of(dist)
        big_l = sizes[left] >= min_cluster_size
        big_r = sizes[right] >= min_cluster_size
        if big_l and big_r:
            for child in (left, right):
                rows.append(CondensedRow(label, next_label, True, lam, sizes[child]))
                stack.append((child, next_label))
                next_label += 1
        elif not big_l and not big_r:
            for child in (left, right):
                for point in leaves(child):
                    rows.append(CondensedRow(label, point, False, lam, 1))
        else:
            small, big = (left, right) if big_r else (right, left)
            for point in leaves(small):
                rows.append(CondensedRow(label, point, False, lam, 1))
            # The big side continues as the same condensed cluster.
            stack.append((big, label))
    return rows


def extract_eom(rows: list[CondensedRow], n: int) -> np.ndarray:
    """Select clusters by excess-of-mass stability; label points, -1 = noise."""
    labels = np.full(n, NOISE, dtype=np.int64)
    if not rows:
        return labels

    births = {0: 0.0}
    cluster_children: dict[int, list[int]] = {0: []}
    for row in rows:
        if row.child_is_cluster:
            births[row.child] = row.lam
            cluster_children[row.child] = []
            cluster_children[row.parent].append(row.child)

    stability = {c: 0.0 for c in births}
    for row in rows:
        stability[row.parent] += (row.lam - births[row.parent]) * row.size

    # Bottom-up: a parent keeps its children unless strictly more stable, so
    # stability ties resolve toward the leaves.
    selected: set[int] = set()
    subtree_value: dict[int, float] = {}
    for cluster in sorted(births, reverse=True):
        kids = cluster_children[cluster]
        if not kids:
            selected.add(cluster)
            subtree_value[cluster] = stability[cluster]
        elif stability[cluster] > sum(subtree_value[k] for k in kids):
            selected.add(cluster)
            selected.difference_update(_descendants(cluster_children, cluster))
            subtree_value[cluster] = stability[cluster]
        else:
            subtree_value[cluster] = sum(subtree_value[k] for k in kids)

    parent_of = {row.child: row.parent for row in rows if row.child_is_cluster}
    label_map = {c: i for i, c in enumerate(sorted(selected))}
    for row in rows:
        if row.child_is_cluster:
            continue
        cluster = row.parent
        while True:
            if cluster in selected:
                labels[row.child] = label_map[cluster]
                break
            if cluster not in parent_of:
                break
            cluster = parent_of[cluster]
    return labels


def _descendants(cluster_children: dict[int, list[int]], cluster: int) -> list[int]:
    out, stack = [], list(cluster_children[cluster])
    while stack:
        c = stack.pop()
        out.append(c)
        stack.extend(cluster_children[c])
    return out


def hdbscan(points: np.ndarray, params: HdbscanParams) -> np.ndarray:
    """Cluster 2D points; returns per-point labels with NOISE for sparse points."""
    params.validate()
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise InputError(f"points must be an (n, d) array, got shape {pts.shape}")
    n = len(pts)
    if n < 1:
        raise InputError("need at least one point")
    if n < params.min_cluster_size:
        return np.full(n, NOISE, dtype=np.int64)
    reach = mutual_reachability(pts, params.min_samples)
    edges = mst_edges(reach)
    merges = single_linkage(edges, n)
    rows = condense_tree(merges, n, params.min_cluster_size)
    return extract_eom(rows, n)


def collect_subtopics(
    topic_id: int,
    member_ids: list[str],
    labels: np.ndarray,
    label_fn: Callable[[list[str]], str],
) -> list[Subtopic]:
    """Group a topic's members by cluster label into ordered subtopics.

    Clusters are ordered by descending size; noise points are merged into a
    single trailing "Other" bucket (suppressed when empty) so every item
    stays visible and selectable.
    """
    if len(member_ids) != len(labels):
        raise InputError(f"{len(member_ids)} members but {len(labels)} labels")
    groups: dict[int, list[str]] = {}
    for item_id, label in zip(member_ids, labels):
        groups.setdefault(int(label), []).append(item_id)
    clusters = [(sorted(ids)) for label, ids in groups.items() if label != NOISE]
    clusters.sort(key=lambda ids: (-len(ids), ids[0]))

    subtopics = []
    for index, ids in enumerate(clusters):
        subtopics.append(Subtopic(
            id=f"{topic_id}.{index}",
            label=label_fn(ids),
            member_ids=ids,
        ))
    noise = sorted(groups.get(NOISE, []))
    if noise:
        subtopics.append(Subtopic(
            id=f"{topic_id}.{len(clusters)}",
            label="Other",
            member_ids=noise,
            is_noise_bucket=True,
        ))
    return subtopics
