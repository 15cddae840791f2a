"""HTTP challenge/verify service.

Two endpoints:

    GET  /api/v1/challenge      issue a sentence challenge (single-use, TTL)
    POST /api/v1/verify/{id}    upload a WAV recording, get the verdict

Audio is processed strictly in memory; nothing is written to disk. Errors
come back as JSON objects ``{"code": ..., "message": ...}`` with a specific
code per failure mode.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .challenge import (
    DEFAULT_TTL,
    ChallengeAlreadyUsedError,
    ChallengeExpiredError,
    ChallengeRegistry,
    Corpus,
    UnknownChallengeError,
    sample_sentence,
)
from .classifier import Model
from .framing import DEFAULT_FRAMING, FramingConfig
from .pipeline import analyze_buffer
from .wavio import WavError, parse_wav


@dataclass(frozen=True)
class ServiceConfig:
    """Operational limits of the verify endpoint."""

    ttl: float = DEFAULT_TTL
    min_duration: float = 1.0
    max_duration: float = 30.0

    def __post_init__(self) -> None:
        if self.ttl <= 0:
            raise ValueError("ttl must be positive")
        if not 0 < self.min_duration < self.max_duration:
            raise ValueError("need 0 < min_duration < max_duration")


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(
    corpus: Corpus,
    model: Model,
    framing: FramingConfig = DEFAULT_FRAMING,
    config: ServiceConfig = ServiceConfig(),
    *,
    challenge_seed: int | None = None,
    clock: Callable[[], float] = time.time,
) -> FastAPI:
    """Build the FastAPI app around a sentence corpus and a trained model.

    ``challenge_seed`` makes the sentence sequence reproducible and ``clock``
    makes expiry testable; production uses the defaults.
    """
    if corpus is None or model is None:
        raise ValueError("service needs both a sentence corpus and a model")
    registry = ChallengeRegistry(clock=clock)
    rng = random.Random(challenge_seed)
    app = FastAPI(title="voicegate", version="0.1.0")
    # demo clients are served as static files from a separate origin, so the
    # API must answer cross-origin requests; nothing here uses credentials
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"]
    )

    @app.get("/api/v1/challenge")
    def create_challenge() -> dict:
        challenge = sample_sentence(corpus, ttl=config.ttl, rng=rng, now=clock())
        registry.issue(challenge)
        return {
            "id": challenge.id,
            "sentence": challenge.sentence,
            "expires_at": challenge.expires_at,
        }

    @app.post("/api/v1/verify/{challenge_id}")
    async def verify(challenge_id: str, request: Request):
        body = await request.body()
        try:
            buffer = parse_wav(body)
        except WavError as exc:
            return _error(400, "bad_audio", str(exc))
        if buffer.duration < config.min_duration:
            return _error(
                400,
                "audio_too_short",
                f"{buffer.duration:.3f}s of audio, need at least {config.min_duration}s",
            )
        if buffer.duration > config.max_duration:
            return _error(
                400,
                "audio_too_long",
                f"{buffer.duration:.3f}s of audio, limit is {config.max_duration}s",
            )
        # consume only after the upload proved valid, so a bad recording
        # leaves the challenge retryable
        try:
            registry.consume(challenge_id)
        except UnknownChallengeError:
            return _error(404, "unknown_challenge", f"no challenge {challenge_id}")
        except ChallengeExpiredError:
            return _error(410, "challenge_expired", f"challenge {challenge_id} expired")
        except ChallengeAlreadyUsedError:
            return _error(
                409, "challenge_already_used", f"challenge {challenge_id} was already used"
            )
        analysis = analyze_buffer(buffer, model, framing)
        return {
            "challenge_id": challenge_id,
            "verdict": analysis.verdict.value,
            "score": analysis.score,
            "features": {
                "raw": {
                    "energy": analysis.raw.energy,
                    "amplitude": analysis.raw.amplitude,
                    "crossings": analysis.raw.crossings,
                    "frame_count": analysis.raw.frame_count,
                },
                "normalized": {
                    "energy": analysis.normalized.energy,
                    "amplitude": analysis.normalized.amplitude,
                    "crossings": analysis.normalized.crossings,
                },
            },
        }

    return app
