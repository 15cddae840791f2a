// Page wiring: DOM on one side, SessionController + MicRecorder on the other.

import { ApiClient } from './api.js';
import { MicRecorder, MicrophonePermissionError } from './recorder.js';
import { SessionController, secondsLeft, submitBlock, type SessionState } from './session.js';
import { encodeCapture } from './wav.js';
import { EnvelopeBuffer, drawEnvelope } from './waveform.js';

const params = new URLSearchParams(location.search);
const api = new ApiClient(params.get('api') ?? 'http://127.0.0.1:8100');

const el = {
  sentence: document.getElementById('sentence') as HTMLParagraphElement,
  countdown: document.getElementById('countdown') as HTMLSpanElement,
  notice: document.getElementById('notice') as HTMLDivElement,
  record: document.getElementById('record') as HTMLButtonElement,
  submit: document.getElementById('submit') as HTMLButtonElement,
  again: document.getElementById('again') as HTMLButtonElement,
  retry: document.getElementById('retry') as HTMLButtonElement,
  result: document.getElementById('result') as HTMLDivElement,
  canvas: document.getElementById('waveform') as HTMLCanvasElement,
  status: document.getElementById('status') as HTMLSpanElement,
};

const envelope = new EnvelopeBuffer();
const recorder = new MicRecorder((peak) => {
  envelope.push(peak);
  drawEnvelope(el.canvas, envelope.frames);
});

const session = new SessionController({ api, onChange: render });

function render(state: SessionState): void {
  el.sentence.textContent = state.challenge
    ? `“${state.challenge.sentence}”`
    : '— no challenge —';

  if (state.notice) {
    el.notice.textContent = state.notice.text;
    el.notice.className = `notice ${state.notice.kind}`;
  } else {
    el.notice.textContent = '';
    el.notice.className = 'notice hidden';
  }
  el.retry.classList.toggle('hidden', state.challenge !== null);

  el.record.disabled =
    !state.challenge || state.phase === 'submitting' || state.phase === 'done';
  el.record.textContent = state.phase === 'recording' ? 'Stop recording' : 'Record';

  el.submit.disabled = submitBlock(state, Date.now() / 1000) !== null;

  const statusText: Record<SessionState['phase'], string> = {
    idle: state.capture ? 'Ready' : 'Press Record and read the sentence aloud',
    recording: 'Recording… press Stop when done',
    recorded: `Recorded ${state.capture?.seconds.toFixed(1) ?? '?'} s — press Submit`,
    submitting: 'Checking…',
    done: 'Verified',
  };
  el.status.textContent = statusText[state.phase];

  if (state.result) {
    const human = state.result.verdict === 'human';
    el.result.className = `result ${human ? 'human' : 'bot'}`;
    el.result.innerHTML = human
      ? `<strong>You sound human.</strong> Score ${state.result.score.toFixed(4)} — access granted.`
      : `<strong>That sounded synthetic.</strong> Score ${state.result.score.toFixed(4)} — try again with your own voice.`;
    el.again.classList.remove('hidden');
  } else {
    el.result.className = 'result hidden';
    el.again.classList.add('hidden');
  }
}

el.record.addEventListener('click', async () => {
  if (recorder.recording) {
    const raw = await recorder.stop();
    session.recordingFinished(
      raw.samples.length === 0
        ? { wav: new Uint8Array(0), seconds: 0, peak: 0 }
        : encodeCapture([raw.samples], raw.sampleRate),
    );
    return;
  }
  try {
    envelope.clear();
    drawEnvelope(el.canvas, envelope.frames);
    await recorder.start();
    session.recordingStarted();
  } catch (error) {
    el.notice.className = 'notice error';
    el.notice.textContent =
      error instanceof MicrophonePermissionError
        ? error.message
        : `Could not start recording: ${error}`;
  }
});

el.submit.addEventListener('click', () => void session.submit());
el.again.addEventListener('click', () => void session.startOver());
el.retry.addEventListener('click', () => void session.refresh());

setInterval(() => {
  void session.tick();
  const left = secondsLeft(session.snapshot, Date.now() / 1000);
  el.countdown.textContent = session.snapshot.challenge ? `${Math.ceil(left)} s` : '';
}, 500);

void session.refresh();
