"""Remote (OpenAI-compatible) providers; optional and never used by tests.

Credentials come from the environment: CTXSCOPE_API_KEY (required) and
CTXSCOPE_API_BASE (default https://api.openai.com/v1). These providers are
non-deterministic, which excludes them from every test suite by policy.
"""

import os

import httpx
import numpy as np

from .errors import ProviderError

DEFAULT_BASE = "https://api.openai.com/v1"


def _auth() -> tuple[str, dict]:
    key = os.environ.get("CTXSCOPE_API_KEY")
    if not key:
        raise ProviderError("remote", "CTXSCOPE_API_KEY is not set")
    base = os.environ.get("CTXSCOPE_API_BASE", DEFAULT_BASE).rstrip("/")
    return base, {"Authorization": f"Bearer {key}"}


class RemoteEmbeddingProvider:
    name = "remote"

    def __init__(self, model: str = "text-embedding-3-small", dimension: int = 256):
        self.model = model
        self.dimension = dimension

    def embed(self, text: str) -> np.ndarray:
        base, headers = _auth()
        try:
            resp = httpx.post(
                f"{base}/embeddings",
                headers=headers,
                json={"model": self.model, "input": text, "dimensions": self.dimension},
                timeout=30.0,
            )
            resp.raise_for_status()
            return np.array(resp.json()["data"][0]["embedding"], dtype=np.float64)
        except httpx.HTTPError as exc:
            raise ProviderError(self.name, str(exc)) from exc


class RemoteResponder:
    """Chat provider; returns the model text with no citation extraction,
    so citation-soundness checks only apply to the offline stub."""

    name = "remote-chat"

    def __init__(self, model: str = "gpt-4o"):
        self.model = model

    def __call__(self, prompt: str, rendered_context: str) -> tuple[str, list[str]]:
        base, headers = _auth()
        try:
            resp = httpx.post(
                f"{base}/chat/completions",
                headers=headers,
                json={
                    "model": self.model,
                    "messages": [
                        {"role": "system", "content": "Answer strictly from the provided context."},
                        {"role": "user", "content": f"{rendered_context}\n\n{prompt}"},
                    ],
                },
                timeout=60.0,
            )
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"], []
        except httpx.HTTPError as exc:
            raise ProviderError(self.name, str(exc)) from exc
