"""Chat-completion providers: an OpenAI-compatible HTTP client and a scripted stub.

The search loop depends only on the ``complete(ChatRequest) -> ChatResult``
shape, so the HTTP provider and the stub are interchangeable. Credentials
come from the environment (OPENAI_API_KEY, OPENAI_API_BASE, OPENAI_MODEL)
and are never echoed into errors, logs, or reprs.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import requests

DEFAULT_BASE_URL = "https://api.openai.com/v1"
RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[dict, ...]
    params: dict = field(default_factory=dict)

    @classmethod
    def single_turn(cls, model: str, prompt: str, **params) -> "ChatRequest":
        return cls(model=model, messages=({"role": "user", "content": prompt},), params=dict(params))


@dataclass(frozen=True)
class ChatResult:
    text: str
    usage: dict
    retries: int
    model: str


class ProviderError(RuntimeError):
    """A completion attempt that cannot return text.

    kind: 'auth' (bad credentials, not retried), 'transport' (network or
    retryable status exhausted retries), 'protocol' (non-retryable HTTP
    status), 'malformed' (response body missing expected fields), or
    'script-exhausted' (stub ran out of canned responses).
    """

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass
class ProviderConfig:
    endpoint: str = DEFAULT_BASE_URL
    api_key: str = ""
    model: str = ""
    timeout: float = 60.0
    max_retries: int = 3
    backoff: float = 1.0
    requests_per_minute: float | None = None

    def __post_init__(self) -> None:
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")

    def __repr__(self) -> str:  # keep the key out of logs and tracebacks
        masked = "***" if self.api_key else "(unset)"
        return (
            f"ProviderConfig(endpoint={self.endpoint!r}, api_key={masked}, "
            f"model={self.model!r}, timeout={self.timeout}, "
            f"max_retries={self.max_retries}, backoff={self.backoff}, "
            f"requests_per_minute={self.requests_per_minute})"
        )


def _requests_transport(url: str, headers: dict, body: dict, timeout: float):
    """Default transport: POST JSON, return (status_code, parsed body)."""
    response = requests.post(url, headers=headers, json=body, timeout=timeout)
    try:
        payload = response.json()
    except ValueError:
        payload = {}
    return response.status_code, payload


class _TokenBucket:
    """Soft requests-per-minute cap shared by all calls on one provider."""

    def __init__(self, per_minute: float, clock=time.monotonic, sleep=time.sleep):
        self.capacity = per_minute
        self.tokens = per_minute
        self.rate = per_minute / 60.0
        self.clock = clock
        self.sleep = sleep
        self.last = clock()

    def acquire(self) -> None:
        while True:
            now = self.clock()
            self.tokens = min(self.capacity, self.tokens + (now - self.last) * self.rate)
            self.last = now
            if self.tokens >= 1.0:
                self.tokens -= 1.0
                return
            self.sleep((1.0 - self.tokens) / self.rate)


class OpenAIChatProvider:
    """Chat-completions over the OpenAI-compatible wire format.

    transport/sleep/clock are injectable so tests can simulate status codes
    and time without a network. Retries transport errors and retryable
    statuses (429/5xx) with exponential backoff; auth failures are final.
    """

    def __init__(self, config: ProviderConfig, transport=None, sleep=time.sleep, clock=time.monotonic):
        if not config.api_key:
            raise ProviderError("auth", "no API key configured")
        self.config = config
        self.model = config.model
        self._transport = transport or _requests_transport
        self._sleep = sleep
        self._bucket = None
        if config.requests_per_minute:
            self._bucket = _TokenBucket(config.requests_per_minute, clock=clock, sleep=sleep)

    @classmethod
    def from_env(cls, **overrides) -> "OpenAIChatProvider":
        config = ProviderConfig(
            endpoint=os.environ.get("OPENAI_API_BASE", DEFAULT_BASE_URL),
            api_key=os.environ.get("OPENAI_API_KEY", ""),
            model=overrides.pop("model", None) or os.environ.get("OPENAI_MODEL", ""),
            **overrides,
        )
        return cls(config)

    def complete(self, req: ChatRequest) -> ChatResult:
        url = self.config.endpoint.rstrip("/") + "/chat/completions"
        headers = {
            "Authorization": f"Bearer {self.config.api_key}",
            "Content-Type": "application/json",
        }
        body = {"model": req.model or self.config.model, "messages": list(req.messages)}
        body.update(req.params)

        retries = 0
        last_failure = "no attempt made"
        for attempt in range(self.config.max_retries + 1):
            if self._bucket is not None:
                self._bucket.acquire()
            try:
                status, payload = self._transport(url, headers, body, self.config.timeout)
            except requests.RequestException as exc:
                last_failure = f"transport error: {type(exc).__name__}"
                status = None
                payload = None
            if status == 200:
                try:
                    text = payload["choices"][0]["message"]["content"]
                except (KeyError, IndexError, TypeError):
                    raise ProviderError(
                        "malformed", "response body has no choices[0].message.content"
                    ) from None
                usage = payload.get("usage", {}) if isinstance(payload, dict) else {}
                return ChatResult(text=text, usage=usage, retries=retries, model=body["model"])
            if status in (401, 403):
                raise ProviderError("auth", f"authentication rejected (HTTP {status})")
            if status is not None and status not in RETRYABLE_STATUS:
                raise ProviderError("protocol", f"unexpected HTTP status {status}")
            if status is not None:
                last_failure = f"HTTP {status}"
            if attempt < self.config.max_retries:
                self._sleep(self.config.backoff * (2**attempt))
                retries += 1
        raise ProviderError(
            "transport",
            f"gave up after {self.config.max_retries + 1} attempts; last failure: {last_failure}",
        )


class ScriptedProvider:
    """Replays canned response texts in order; records every prompt it saw."""

    def __init__(self, responses: list[str], model: str = "scripted"):
        self._responses = list(responses)
        self._cursor = 0
        self.model = model
        self.prompts: list[str] = []
        self.requests: list[ChatRequest] = []

    def complete(self, req: ChatRequest) -> ChatResult:
        self.requests.append(req)
        for message in req.messages:
            if message.get("role") == "user":
                self.prompts.append(message.get("content", ""))
        if self._cursor >= len(self._responses):
            raise ProviderError(
                "script-exhausted",
                f"script exhausted after {len(self._responses)} responses",
            )
        text = self._responses[self._cursor]
        self._cursor += 1
        return ChatResult(text=text, usage={}, retries=0, model=self.model)


def scripted_stub(responses: list[str]) -> ScriptedProvider:
    return ScriptedProvider(responses)
