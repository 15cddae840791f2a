"""Sentence challenges: corpus loading, sampling, and single-use tracking.

A challenge asks the user to read one sentence aloud. Sentences come from
plain-text documents, are kept only when they have 8 to 20 words, and are
deduplicated. Issued challenges are single-use and expire after a TTL.
"""

from __future__ import annotations

import random
import re
import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

MIN_WORDS = 8
MAX_WORDS = 20
DEFAULT_TTL = 120.0

# terminal punctuation followed by whitespace ends a sentence; end of text too
_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+")


class EmptyCorpusError(ValueError):
    """No sentences to sample from."""


class NoEligibleSentencesError(ValueError):
    """No sentence in the source documents had 8 to 20 words."""


class UnknownChallengeError(KeyError):
    """The challenge id was never issued (or has been pruned)."""


class ChallengeExpiredError(Exception):
    """The challenge TTL ran out before verification."""


class ChallengeAlreadyUsedError(Exception):
    """The challenge was already consumed by a verification attempt."""


class ChallengeState(Enum):
    PENDING = "pending"
    CONSUMED = "consumed"
    EXPIRED = "expired"


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.sentences:
            raise EmptyCorpusError("corpus holds no sentences")


@dataclass
class Challenge:
    id: str
    sentence: str
    issued_at: float
    expires_at: float
    state: ChallengeState = ChallengeState.PENDING

    def __post_init__(self) -> None:
        if not self.expires_at > self.issued_at:
            raise ValueError("expires_at must lie after issued_at")


def split_sentences(text: str) -> list[str]:
    """Split a document at sentence-ending punctuation plus whitespace."""
    return [part.strip() for part in _SENTENCE_BOUNDARY.split(text) if part.strip()]


def _word_count(sentence: str) -> int:
    return len(sentence.split())


def load_corpus(documents: list[str]) -> Corpus:
    """Collect eligible sentences (8..20 words, deduplicated, input order)."""
    seen: dict[str, None] = {}
    for document in documents:
        for sentence in split_sentences(document):
            if MIN_WORDS <= _word_count(sentence) <= MAX_WORDS:
                seen.setdefault(sentence, None)
    if not seen:
        raise NoEligibleSentencesError(
            f"no sentence with {MIN_WORDS} to {MAX_WORDS} words in the corpus"
        )
    return Corpus(sentences=tuple(seen))


def sample_sentence(
    corpus: Corpus,
    *,
    ttl: float = DEFAULT_TTL,
    rng: random.Random | None = None,
    now: float | None = None,
) -> Challenge:
    """Draw a uniform random sentence and wrap it in a fresh challenge.

    Repeats across draws are allowed; ids are unique regardless.
    """
    if ttl <= 0:
        raise ValueError("ttl must be positive")
    rng = rng if rng is not None else random.Random()
    issued_at = time.time() if now is None else now
    return Challenge(
        id=uuid.uuid4().hex,
        sentence=rng.choice(corpus.sentences),
        issued_at=issued_at,
        expires_at=issued_at + ttl,
    )


@dataclass
class ChallengeRegistry:
    """Thread-safe single-use store of issued challenges.

    ``clock`` is injectable so expiry is testable without sleeping. Terminal
    challenges are kept around (and pruned after ``retention`` seconds past
    expiry) so that duplicate and late verify attempts get precise errors.
    """

    clock: Callable[[], float] = time.time
    retention: float = 3600.0
    _store: dict[str, Challenge] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def issue(self, challenge: Challenge) -> Challenge:
        with self._lock:
            if challenge.id in self._store:
                raise ValueError(f"challenge id {challenge.id} already issued")
            self._prune_locked()
            self._store[challenge.id] = challenge
        return challenge

    def consume(self, challenge_id: str) -> Challenge:
        """Atomically mark a pending, unexpired challenge as consumed.

        Exactly one caller can ever succeed for a given id.
        """
        with self._lock:
            challenge = self._store.get(challenge_id)
            if challenge is None:
                raise UnknownChallengeError(challenge_id)
            if challenge.state is ChallengeState.CONSUMED:
                raise ChallengeAlreadyUsedError(challenge_id)
            if challenge.state is ChallengeState.EXPIRED:
                raise ChallengeExpiredError(challenge_id)
            if self.clock() >= challenge.expires_at:
                challenge.state = ChallengeState.EXPIRED
                raise ChallengeExpiredError(challenge_id)
            challenge.state = ChallengeState.CONSUMED
            return challenge

    def get(self, challenge_id: str) -> Challenge:
        with self._lock:
            challenge = self._store.get(challenge_id)
            if challenge is None:
                raise UnknownChallengeError(challenge_id)
            return challenge

    def __len__(self) -> int:
        with self._lock:
            return len(self._store)

    def _prune_locked(self) -> None:
        cutoff = self.clock() - self.retention
        stale = [cid for cid, ch in self._store.items() if ch.expires_at < cutoff]
        for cid in stale:
            del self._store[cid]
