// Thin typed client for the two verification-service endpoints. This module
// is the only place the frontend talks to the network.

export interface ChallengeResponse {
  id: string;
  sentence: string;
  /** Unix epoch seconds. */
  expires_at: number;
}

export interface VerifyResponse {
  challenge_id: string;
  verdict: 'human' | 'bot';
  score: number;
  features: {
    raw: { energy: number; amplitude: number; crossings: number; frame_count: number };
    normalized: { energy: number; amplitude: number; crossings: number };
  };
}

/** A structured error body ({code, message}) from the service. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let code = 'unknown_error';
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (typeof body.code === 'string') code = body.code;
    if (typeof body.message === 'string') message = body.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async fetchChallenge(): Promise<ChallengeResponse> {
    const response = await fetch(`${this.baseUrl}/api/v1/challenge`);
    await raiseForStatus(response);
    return response.json();
  }

  async verify(challengeId: string, wav: Uint8Array): Promise<VerifyResponse> {
    const response = await fetch(`${this.baseUrl}/api/v1/verify/${challengeId}`, {
      method: 'POST',
      headers: { 'content-type': 'audio/wav' },
      body: wav as BodyInit,
    });
    await raiseForStatus(response);
    return response.json();
  }
}
