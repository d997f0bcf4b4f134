"""Chat-completion backends: an HTTP client for any OpenAI-shaped endpoint
plus a scriptable mock for tests.

Credentials come from an environment variable only; the variable name is
part of the configuration, the value never is.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass

import httpx

from .errors import BackendRefusal, BackendUnavailable

log = logging.getLogger(__name__)

DEFAULT_TEMPERATURE = 1.0
DEFAULT_MAX_TOKENS = 4096

_REFUSAL_MARKERS = ("i cannot", "i can't", "i'm unable", "i am unable")


@dataclass(frozen=True)
class GenerationBackendConfig:
    endpoint: str
    model: str
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: int = DEFAULT_MAX_TOKENS
    credential_env: str = "GSNKIT_API_KEY"
    timeout: float = 60.0

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")


class ChatBackend:
    """Blocking client for a chat-completion endpoint; one retry on transport
    failure, none on refusal."""

    def __init__(self, config: GenerationBackendConfig, client: httpx.Client | None = None):
        self.config = config
        self._client = client or httpx.Client(timeout=config.timeout)

    @property
    def name(self) -> str:
        return self.config.model

    def complete(self, system_prompt: str, user_prompt: str) -> str:
        body = {
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": system_prompt},
                {"role": "user", "content": user_prompt},
            ],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        credential = os.environ.get(self.config.credential_env)
        if credential:
            headers["Authorization"] = f"Bearer {credential}"
        if log.isEnabledFor(logging.DEBUG):
            log.debug("request to %s: %s", self.config.endpoint, json.dumps(body)[:2000])

        last_error: Exception | None = None
        for attempt in range(2):
            try:
                response = self._client.post(self.config.endpoint, json=body, headers=headers)
                break
            except httpx.HTTPError as exc:
                last_error = exc
        else:
            raise BackendUnavailable(f"cannot reach {self.config.endpoint}: {last_error}")

        if response.status_code >= 400:
            raise BackendUnavailable(
                f"backend returned HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendUnavailable(f"malformed backend response: {exc}")
        if log.isEnabledFor(logging.DEBUG):
            log.debug("reply: %s", content[:2000])
        if _looks_like_refusal(content):
            raise BackendRefusal(content)
        return content


def _looks_like_refusal(content: str) -> bool:
    head = content.strip().lower()[:120]
    return any(marker in head for marker in _REFUSAL_MARKERS) and "(" not in head


class MockBackend:
    """Returns canned replies in order; used by tests and offline demos."""

    def __init__(self, replies: list[str], name: str = "mock"):
        self._replies = list(replies)
        self.name = name
        self.calls: list[tuple[str, str]] = []

    def complete(self, system_prompt: str, user_prompt: str) -> str:
        self.calls.append((system_prompt, user_prompt))
        if not self._replies:
            raise BackendUnavailable("mock backend exhausted its replies")
        if len(self._replies) == 1:
            return self._replies[0]
        return self._replies.pop(0)
