"""Chat-completion clients: JSON-over-HTTP with a disk response cache, plus mocks.

Every request/reply pair is cached keyed by SHA-256 of (template id, filled
prompt, model), which makes the whole scripting stage byte-reproducible once
the cache is warm and lets tests replay canned responses offline.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from typing import Callable, Protocol

CREDENTIAL_ENV_VAR = "CTXFORGE_CHAT_TOKEN"


class ChatServiceError(RuntimeError):
    """Transport failure, timeout after retries, or an unanswerable mock lookup."""


class SchemaError(ValueError):
    """Service reply is not valid JSON or lacks required fields."""


@dataclass
class ChatClientConfig:
    endpoint: str = ""
    model: str = "default"
    timeout_s: float = 60.0
    max_retries: int = 2
    cache_dir: str | None = None

    def __post_init__(self) -> None:
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("retries must be non-negative")


def cache_key(template_id: str, prompt: str, model: str) -> str:
    payload = "\x1f".join([template_id, prompt, model]).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


class DiskResponseCache:
    """One JSON file per key; writes go through a temp file so concurrent
    readers never observe a torn entry."""

    def __init__(self, cache_dir: str):
        self.cache_dir = cache_dir
        os.makedirs(cache_dir, exist_ok=True)

    def _path(self, key: str) -> str:
        return os.path.join(self.cache_dir, f"{key}.json")

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not os.path.exists(path):
            return None
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)["response"]

    def set(self, key: str, template_id: str, model: str, response: str) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(
                    {"template_id": template_id, "model": model, "response": response},
                    fh,
                    ensure_ascii=False,
                )
            os.replace(tmp, self._path(key))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)


class ChatClient(Protocol):
    def complete(self, prompt: str, template_id: str, tags: dict | None = None) -> str: ...


class HttpChatClient:
    """Generic chat-completion contract: messages in, assistant text out."""

    def __init__(self, config: ChatClientConfig):
        if not config.endpoint:
            raise ValueError("an endpoint URL is required")
        self.config = config
        self.cache = DiskResponseCache(config.cache_dir) if config.cache_dir else None

    def complete(self, prompt: str, template_id: str, tags: dict | None = None) -> str:
        key = cache_key(template_id, prompt, self.config.model)
        if self.cache:
            hit = self.cache.get(key)
            if hit is not None:
                return hit

        import httpx

        headers = {}
        token = os.environ.get(CREDENTIAL_ENV_VAR)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
        }
        last_err: Exception | None = None
        for _ in range(self.config.max_retries + 1):
            try:
                resp = httpx.post(
                    self.config.endpoint,
                    json=body,
                    headers=headers,
                    timeout=self.config.timeout_s,
                )
                resp.raise_for_status()
                data = resp.json()
                text = data["choices"][0]["message"]["content"]
                if self.cache:
                    self.cache.set(key, template_id, self.config.model, text)
                return text
            except (KeyError, IndexError, TypeError) as err:
                raise SchemaError(f"malformed completion payload: {err}") from err
            except Exception as err:  # noqa: BLE001 - transport errors retried uniformly
                last_err = err
        raise ChatServiceError(f"chat completion failed after retries: {last_err}")


class MockChatClient:
    """Replays canned responses; raises on a miss instead of guessing.

    Lookup order for a request tagged with a source id:
    ``"<template_id>:<source_id>"``, then ``"<template_id>"``, then the full
    SHA-256 cache key. Values may be strings or JSON-serializable objects.
    """

    def __init__(self, responses: dict, model: str = "mock"):
        self.responses = responses
        self.model = model

    @classmethod
    def from_file(cls, path: str) -> "MockChatClient":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def complete(self, prompt: str, template_id: str, tags: dict | None = None) -> str:
        tags = tags or {}
        candidates = []
        source_id = tags.get("source_id")
        if source_id:
            candidates.append(f"{template_id}:{source_id}")
        candidates.append(template_id)
        candidates.append(cache_key(template_id, prompt, self.model))
        for key in candidates:
            if key in self.responses:
                value = self.responses[key]
                return value if isinstance(value, str) else json.dumps(value)
        raise ChatServiceError(f"no mock response for any of {candidates}")


class ScriptedChatClient:
    """Adapter for tests: a plain function produces the reply."""

    def __init__(self, fn: Callable[[str, str, dict], str]):
        self.fn = fn

    def complete(self, prompt: str, template_id: str, tags: dict | None = None) -> str:
        return self.fn(prompt, template_id, tags or {})
