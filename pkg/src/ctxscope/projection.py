"""2D kernel PCA with a cosine kernel, per topic, plus Nyström projection.

The kernel is plain cosine similarity, which on unit vectors is the Gram
matrix and therefore positive semi-definite. Fitting double-centers the
kernel and extracts the top-2 eigenpairs with orthogonal (block power)
iteration refined by an analytic 2x2 Rayleigh-Ritz step; no dense
eigendecomposition is used here so the test-suite oracle (a full dense
symmetric eigensolver) stays an independent route.

Item coordinates are the standard kernel PCA scores sqrt(lambda) * v. Row
means and the grand mean of the kernel are retained so new vectors can be
projected later (Nystrom extension) without refitting.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError

EIG_TOL = 1e-10
EIG_MAX_ITERS = 10000
# Eigenvalues at or below this share of the spectrum scale count as null axes.
NULL_EIGENVALUE = 1e-12


@dataclass
class ProjectionModel:
    topic_id: int
    training_ids: list[str]
    kernel_row_means: np.ndarray  # (n,)
    kernel_grand_mean: float
    eigenvalues: np.ndarray  # (2,), lambda1 >= lambda2 >= 0
    eigenvectors: np.ndarray  # (2, n), orthonormal rows (zero rows on null axes)
    coords: dict[str, tuple[float, float]]
    # In-memory only: training embedding rows aligned with training_ids.
    # Rebound after bundle load by re-embedding; never serialized.
    training: np.ndarray | None = field(default=None, repr=False, compare=False)


def _center_kernel(gram: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    row_means = gram.mean(axis=1)
    grand_mean = float(gram.mean())
    centered = gram - row_means[:, None] - row_means[None, :] + grand_mean
    return centered, row_means, grand_mean


def _eig2x2_sym(a: float, b: float, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of [[a, b], [b, c]] in closed form, eigenvalues descending."""
    half_tr = 0.5 * (a + c)
    disc = np.hypot(0.5 * (a - c), b)
    lam1, lam2 = half_tr + disc, half_tr - disc
    if abs(b) > 1e-300:
        v1 = np.array([b, lam1 - a])
        v2 = np.array([b, lam2 - a])
    elif a >= c:
        v1, v2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    else:
        v1, v2 = np.array([0.0, 1.0]), np.array([1.0, 0.0])
    v1 = v1 / np.linalg.norm(v1)
    v2 = v2 / np.linalg.norm(v2)
    return np.array([lam1, lam2]), np.stack([v1, v2], axis=1)


def _top2_eigenpairs(centered: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Top-2 eigenpairs of a symmetric PSD matrix by orthogonal iteration."""
    n = centered.shape[0]
    frob = float(np.linalg.norm(centered))
    if frob < 1e-14 or n == 1:
        return np.zeros(2), np.zeros((2, n))

    rng = np.random.default_rng(0x5EED)  # fixed start: fitting stays deterministic
    basis, _ = np.linalg.qr(rng.standard_normal((n, 2)))
    for _ in range(EIG_MAX_ITERS):
        basis, _ = np.linalg.qr(centered @ basis)
        # Rayleigh-Ritz on the 2D subspace resolves near-equal eigenvalues.
        block = basis.T @ centered @ basis
        lams, rotation = _eig2x2_sym(block[0, 0], block[0, 1], block[1, 1])
        vecs = (basis @ rotation).T
        residual = max(
            float(np.linalg.norm(centered @ vecs[i] - lams[i] * vecs[i]))
            for i in range(2)
        )
        if residual <= EIG_TOL * max(frob, 1.0):
            break
    else:
        raise NumericalError("eigensolver did not converge", residual=residual / frob)

    lams = np.maximum(lams, 0.0)

    scale = max(lams[0], 1.0)
    for i in range(2):
        if lams[i] <= NULL_EIGENVALUE * scale:
            lams[i] = 0.0
            vecs[i] = 0.0
        else:
            vecs[i] = _fix_sign(vecs[i])
    return lams, vecs


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    # Eigenvectors are sign-ambiguous; pin the largest-magnitude entry positive.
    j = int(np.argmax(np.abs(vec)))
    return -vec if vec[j] < 0 else vec


def fit_kernel_pca(topic_id: int, item_ids: list[str], embeddings: np.ndarray) -> ProjectionModel:
    """Fit the per-topic 2D projection. Single-item topics sit at the origin."""
    vectors = np.asarray(embeddings, dtype=np.float64)
    n = vectors.shape[0]
    if n != len(item_ids):
        raise InputError(f"{len(item_ids)} ids but {n} embedding rows")
    if n == 0:
        raise InputError("cannot fit a projection on an empty topic")

    gram = vectors @ vectors.T
    centered, row_means, grand_mean = _center_kernel(gram)
    lams, vecs = _top2_eigenpairs(centered)

    sqrt_l = np.sqrt(lams)
    xs = sqrt_l[0] * vecs[0]
    ys = sqrt_l[1] * vecs[1]
    coords = {item_ids[i]: (float(xs[i]), float(ys[i])) for i in range(n)}
    return ProjectionModel(
        topic_id=topic_id,
        training_ids=list(item_ids),
        kernel_row_means=row_means,
        kernel_grand_mean=grand_mean,
        eigenvalues=lams,
        eigenvectors=vecs,
        coords=coords,
        training=vectors,
    )


def project(model: ProjectionModel, embedding: np.ndarray) -> tuple[float, float]:
    """Nystrom extension: map a new embedding into the fitted 2D space."""
    if model.training is None:
        raise InputError("projection model has no training vectors attached")
    vec = np.asarray(embedding, dtype=np.float64)
    if vec.shape != (model.training.shape[1],):
        raise InputError(f"expected dimension {model.training.shape[1]}, got {vec.shape}")
    kernel_col = model.training @ vec
    centered = kernel_col - kernel_col.mean() - model.kernel_row_means + model.kernel_grand_mean
    out = []
    for axis in range(2):
        lam = model.eigenvalues[axis]
        if lam <= 0.0:
            out.append(0.0)
        else:
            out.append(float(centered @ model.eigenvectors[axis] / np.sqrt(lam)))
    return out[0], out[1]
