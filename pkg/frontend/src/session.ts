// The session state machine. One challenge at a time, one submission per
// challenge, everything serialized: Idle -> Recording -> Recorded ->
// Submitting -> Done, with expiry or server errors resetting to Idle on a
// fresh challenge. DOM-free so the invariants can be tested in node.

import { ApiError, type ChallengeResponse, type VerifyResponse } from './api.js';
import { SILENCE_PEAK, type EncodedCapture } from './wav.js';

export type Phase = 'idle' | 'recording' | 'recorded' | 'submitting' | 'done';

export interface SessionState {
  phase: Phase;
  challenge: ChallengeResponse | null;
  capture: EncodedCapture | null;
  result: VerifyResponse | null;
  /** Banner text; kind drives styling only. */
  notice: { kind: 'info' | 'warning' | 'error'; text: string } | null;
  /** Every challenge id ever handed to verify(); ids are never reused. */
  submittedIds: readonly string[];
}

export function initialState(): SessionState {
  return {
    phase: 'idle',
    challenge: null,
    capture: null,
    result: null,
    notice: null,
    submittedIds: [],
  };
}

export function secondsLeft(state: SessionState, nowSeconds: number): number {
  if (!state.challenge) return 0;
  return Math.max(0, state.challenge.expires_at - nowSeconds);
}

export type SubmitBlock =
  | 'no-challenge'
  | 'nothing-recorded'
  | 'challenge-expired'
  | 'already-submitted'
  | 'busy'
  | null;

/** Why submit is disabled right now, or null when it may proceed. */
export function submitBlock(state: SessionState, nowSeconds: number): SubmitBlock {
  if (state.phase === 'submitting' || state.phase === 'recording') return 'busy';
  if (!state.challenge) return 'no-challenge';
  if (state.submittedIds.includes(state.challenge.id)) return 'already-submitted';
  if (nowSeconds >= state.challenge.expires_at) return 'challenge-expired';
  if (state.phase !== 'recorded' || !state.capture) return 'nothing-recorded';
  return null;
}

interface SessionApi {
  fetchChallenge(): Promise<ChallengeResponse>;
  verify(challengeId: string, wav: Uint8Array): Promise<VerifyResponse>;
}

export interface SessionDeps {
  api: SessionApi;
  /** Unix epoch seconds; injectable for tests. */
  now?: () => number;
  onChange?: (state: SessionState) => void;
}

/**
 * Drives the state machine against the service. All mutation goes through
 * this class, which is what upholds the two hard invariants: a challenge id
 * is handed to verify() at most once, and submit only fires from Recorded
 * with an unexpired challenge.
 */
export class SessionController {
  private state: SessionState = initialState();
  private readonly api: SessionApi;
  private readonly now: () => number;
  private readonly onChange: (state: SessionState) => void;
  private refreshing: Promise<boolean> | null = null;

  constructor(deps: SessionDeps) {
    this.api = deps.api;
    this.now = deps.now ?? (() => Date.now() / 1000);
    this.onChange = deps.onChange ?? (() => {});
  }

  get snapshot(): SessionState {
    return { ...this.state, submittedIds: [...this.state.submittedIds] };
  }

  private emit(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.snapshot);
  }

  /** Fetch a fresh challenge; resolves false when the service is unreachable. */
  refresh(notice: SessionState['notice'] = null): Promise<boolean> {
    if (this.refreshing) return this.refreshing;
    this.refreshing = (async () => {
      try {
        const challenge = await this.api.fetchChallenge();
        this.emit({ phase: 'idle', challenge, capture: null, result: null, notice });
        return true;
      } catch {
        this.emit({
          phase: 'idle',
          challenge: null,
          capture: null,
          result: null,
          notice: { kind: 'error', text: 'Service unreachable. Check the server and retry.' },
        });
        return false;
      } finally {
        this.refreshing = null;
      }
    })();
    return this.refreshing;
  }

  /** Call when microphone capture starts. */
  recordingStarted(): void {
    if (this.state.phase === 'submitting' || !this.state.challenge) return;
    this.emit({ phase: 'recording', capture: null, result: null, notice: null });
  }

  /** Call with the encoded capture when recording stops. */
  recordingFinished(capture: EncodedCapture): void {
    if (this.state.phase !== 'recording') return;
    if (capture.seconds === 0) {
      this.emit({
        phase: 'idle',
        capture: null,
        notice: { kind: 'error', text: 'Nothing was captured. Try recording again.' },
      });
      return;
    }
    const notice =
      capture.peak < SILENCE_PEAK
        ? {
            kind: 'warning' as const,
            text: 'That recording is almost silent. Is the microphone muted? You can re-record before submitting.',
          }
        : null;
    this.emit({ phase: 'recorded', capture, notice });
  }

  /** Submit the capture for the current challenge. */
  async submit(): Promise<void> {
    const nowSeconds = this.now();
    const block = submitBlock(this.state, nowSeconds);
    if (block === 'challenge-expired') {
      await this.resetWithFreshChallenge({
        kind: 'warning',
        text: 'The challenge expired before you submitted. Here is a fresh sentence.',
      });
      return;
    }
    if (block !== null) return;
    const challenge = this.state.challenge!;
    const capture = this.state.capture!;
    // record the id as used *before* the request goes out, so no path —
    // including errors thrown mid-flight — can ever submit it again
    this.emit({
      phase: 'submitting',
      notice: null,
      submittedIds: [...this.state.submittedIds, challenge.id],
    });
    try {
      const result = await this.api.verify(challenge.id, capture.wav);
      this.emit({ phase: 'done', result });
    } catch (error) {
      await this.handleSubmitError(error);
    }
  }

  /** After Done (or any dead end), start a new round. */
  async startOver(): Promise<void> {
    await this.resetWithFreshChallenge(null);
  }

  /**
   * Clock tick for the countdown. Resets the session when the challenge
   * expires before a submission.
   */
  async tick(): Promise<void> {
    const { phase, challenge } = this.state;
    if (!challenge || phase === 'submitting' || phase === 'done') return;
    if (this.now() >= challenge.expires_at) {
      await this.resetWithFreshChallenge({
        kind: 'warning',
        text: 'The challenge expired. Here is a fresh sentence.',
      });
    }
  }

  private async resetWithFreshChallenge(notice: SessionState['notice']): Promise<void> {
    this.emit({ phase: 'idle', challenge: null, capture: null, result: null, notice });
    await this.refresh(notice);
  }

  private async handleSubmitError(error: unknown): Promise<void> {
    if (error instanceof ApiError) {
      switch (error.code) {
        case 'audio_too_short':
        case 'audio_too_long':
        case 'bad_audio':
          // the server leaves the challenge usable on a 400, but this client
          // never sends the same id twice, so rotate to a fresh sentence
          await this.resetWithFreshChallenge({
            kind: 'error',
            text: `Recording rejected (${error.code}): ${error.message} Please re-record the new sentence.`,
          });
          return;
        case 'challenge_expired':
          await this.resetWithFreshChallenge({
            kind: 'warning',
            text: `Challenge expired (${error.code}). Here is a fresh sentence.`,
          });
          return;
        case 'challenge_already_used':
        case 'unknown_challenge':
          await this.resetWithFreshChallenge({
            kind: 'error',
            text: `The server refused that challenge (${error.code}): ${error.message}`,
          });
          return;
        default:
          await this.resetWithFreshChallenge({
            kind: 'error',
            text: `Verification failed (${error.code}): ${error.message}`,
          });
          return;
      }
    }
    // transport failure mid-submit: the id is burned (it may have reached
    // the server), so the only safe path is a fresh challenge
    await this.resetWithFreshChallenge({
      kind: 'error',
      text: 'Network problem while submitting. Fetching a fresh sentence.',
    });
  }
}
