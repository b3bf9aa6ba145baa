"""Session history, token budgeting, and the LLM backend seam.

Two interchangeable backends sit behind one protocol: a scripted backend
that replays canned responses for deterministic runs and tests, and an
HTTP backend speaking the chat-completion wire shape. The gateway owns
history rendering under a token budget and only records an exchange in the
session after the backend call succeeds.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Protocol

import requests


class GatewayError(Exception):
    """Base class for gateway and backend failures."""


class BackendError(GatewayError):
    """The backend could not produce a usable completion."""


class TokenLimitError(GatewayError):
    """The prompt cannot fit within the input token budget."""


class ScriptExhaustedError(BackendError):
    """A scripted backend received a prompt no remaining entry matches."""


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"unknown chat role: {self.role!r}")


_session_ids = itertools.count(1)


@dataclass
class Session:
    """Conversation state: an optional pinned system message plus turn pairs."""

    pinned: ChatMessage | None = None
    turns: list[ChatMessage] = field(default_factory=list)
    session_id: int = field(default_factory=lambda: next(_session_ids))

    def append_pair(self, user_text: str, assistant_text: str) -> None:
        self.turns.append(ChatMessage("user", user_text))
        self.turns.append(ChatMessage("assistant", assistant_text))

    def pairs(self) -> list[tuple[ChatMessage, ChatMessage]]:
        if len(self.turns) % 2 != 0:
            raise ValueError("session turns are not whole user/assistant pairs")
        return [
            (self.turns[i], self.turns[i + 1]) for i in range(0, len(self.turns), 2)
        ]


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.2
    max_output_tokens: int = 512
    model_name: str = "gpt-4"

    def __post_init__(self) -> None:
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature out of range [0, 2]: {self.temperature}")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be at least 1")


def count_tokens(text: str) -> int:
    """Deterministic size estimate: one token per 4 characters, rounded up."""
    return (len(text) + 3) // 4


def render_history(session: Session, token_budget: int) -> list[ChatMessage]:
    """Messages that fit the budget: pinned first, then newest whole pairs.

    The pinned message always survives. Pairs are retained newest-first
    until one no longer fits, so the result is a suffix of the history;
    a user message is never kept without its reply.
    """
    remaining = token_budget
    rendered: list[ChatMessage] = []
    if session.pinned is not None:
        cost = count_tokens(session.pinned.content)
        if cost > remaining:
            raise TokenLimitError(
                f"pinned message needs {cost} tokens, budget is {remaining}"
            )
        rendered.append(session.pinned)
        remaining -= cost
    kept: list[ChatMessage] = []
    for user_msg, assistant_msg in reversed(session.pairs()):
        cost = count_tokens(user_msg.content) + count_tokens(assistant_msg.content)
        if cost > remaining:
            break
        kept[:0] = [user_msg, assistant_msg]
        remaining -= cost
    rendered.extend(kept)
    return rendered


class Backend(Protocol):
    input_token_limit: int

    def generate(self, messages: list[ChatMessage], params: GenerationParams) -> str: ...


def complete(
    backend: Backend,
    session: Session,
    prompt: str,
    params: GenerationParams,
    *,
    input_limit: int | None = None,
) -> str:
    """One exchange: render history, call the backend, record the pair.

    The budget check happens before any backend call; an oversized prompt
    fails fast and leaves the session untouched. The new pair is appended
    only after the backend returns, so a failed call leaves no half-turn.
    """
    if not prompt:
        raise ValueError("prompt must be non-empty")
    limit = input_limit if input_limit is not None else backend.input_token_limit
    prompt_cost = count_tokens(prompt)
    history_budget = limit - prompt_cost
    pinned_cost = (
        count_tokens(session.pinned.content) if session.pinned is not None else 0
    )
    if history_budget < pinned_cost:
        raise TokenLimitError(
            f"prompt needs {prompt_cost} tokens but only "
            f"{max(limit - pinned_cost, 0)} of the {limit}-token input limit "
            "is available"
        )
    messages = render_history(session, history_budget)
    messages.append(ChatMessage("user", prompt))
    reply = backend.generate(messages, params)
    session.append_pair(prompt, reply)
    return reply


@dataclass
class ScriptEntry:
    """One canned response, matched by exact text, substring, or call index."""

    response: str
    exact: str | None = None
    contains: str | None = None
    step: int | None = None
    consumed: bool = False

    def __post_init__(self) -> None:
        matchers = [m for m in (self.exact, self.contains, self.step) if m is not None]
        if len(matchers) != 1:
            raise ValueError("script entry needs exactly one of exact/contains/step")

    def matches(self, prompt: str, call_index: int) -> bool:
        if self.exact is not None:
            return prompt == self.exact
        if self.contains is not None:
            return self.contains in prompt
        return self.step == call_index


class ScriptedBackend:
    """Deterministic backend replaying scripted responses, each used once."""

    def __init__(self, entries: list[ScriptEntry], input_token_limit: int = 8192):
        self.entries = entries
        self.input_token_limit = input_token_limit
        self.calls = 0

    def generate(self, messages: list[ChatMessage], params: GenerationParams) -> str:
        del params
        if not messages or messages[-1].role != "user":
            raise BackendError("scripted backend expects a trailing user message")
        prompt = messages[-1].content
        self.calls += 1
        for entry in self.entries:
            if not entry.consumed and entry.matches(prompt, self.calls):
                entry.consumed = True
                return entry.response
        raise ScriptExhaustedError(
            f"no unconsumed script entry matches call {self.calls}: {prompt[:120]!r}"
        )

    @classmethod
    def from_config(cls, raw_entries: list[dict], input_token_limit: int = 8192) -> "ScriptedBackend":
        entries = []
        for i, raw in enumerate(raw_entries):
            if not isinstance(raw, dict) or set(raw) != {"match", "response"}:
                raise ValueError(f"script entry {i} must have exactly match and response")
            match = raw["match"]
            if not isinstance(match, dict) or len(match) != 1:
                raise ValueError(f"script entry {i} match must set exactly one matcher")
            (key, value), = match.items()
            if key not in ("exact", "contains", "step"):
                raise ValueError(f"script entry {i} has unknown matcher {key!r}")
            if not isinstance(raw["response"], str):
                raise ValueError(f"script entry {i} response must be a string")
            entries.append(ScriptEntry(response=raw["response"], **{key: value}))
        return cls(entries, input_token_limit)


ENV_API_URL = "LCAC_API_URL"
ENV_API_KEY = "LCAC_API_KEY"
ENV_MODEL = "LCAC_MODEL"


class HTTPBackend:
    """Chat-completion HTTP backend with a single transport retry."""

    def __init__(
        self,
        url: str,
        api_key: str,
        input_token_limit: int = 8192,
        timeout: float = 30.0,
        retries: int = 1,
    ):
        self.url = url
        self.api_key = api_key
        self.input_token_limit = input_token_limit
        self.timeout = timeout
        self.retries = retries

    def generate(self, messages: list[ChatMessage], params: GenerationParams) -> str:
        body = {
            "model": params.model_name,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
            "temperature": params.temperature,
            "max_tokens": params.max_output_tokens,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                response = requests.post(
                    self.url, json=body, headers=headers, timeout=self.timeout
                )
                break
            except requests.RequestException as exc:
                last_error = exc
        else:
            raise BackendError(f"transport failure after retry: {last_error}")
        if response.status_code == 401:
            raise BackendError("backend rejected credentials (status 401)")
        if not 200 <= response.status_code < 300:
            raise BackendError(
                f"backend returned status {response.status_code}: {response.text[:200]}"
            )
        try:
            payload = response.json()
            choices = payload["choices"]
            content = choices[0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError):
            raise BackendError(
                f"malformed completion payload: {response.text[:200]}"
            ) from None
        if not isinstance(content, str):
            raise BackendError("completion content is not text")
        return content


def http_backend_from_env(environ: dict[str, str] | None = None) -> HTTPBackend:
    env = environ if environ is not None else os.environ
    for var in (ENV_API_URL, ENV_API_KEY):
        if not env.get(var):
            raise BackendError(f"missing environment variable {var}")
    return HTTPBackend(url=env[ENV_API_URL], api_key=env[ENV_API_KEY])


def default_model_from_env(environ: dict[str, str] | None = None) -> str:
    env = environ if environ is not None else os.environ
    return env.get(ENV_MODEL) or "gpt-4"
