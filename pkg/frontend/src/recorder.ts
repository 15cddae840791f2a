// Microphone capture. Raw Float32 chunks are collected at the context rate
// and downmixed per chunk; encoding to the upload format happens in wav.ts
// when the recording stops.

import { downmixToMono } from './wav.js';

export class MicrophonePermissionError extends Error {
  constructor() {
    super(
      'Microphone access was denied. Allow microphone use for this page in the browser settings, then reload.',
    );
    this.name = 'MicrophonePermissionError';
  }
}

export interface RawCapture {
  samples: Float32Array;
  sampleRate: number;
}

/**
 * Records mono audio from the default microphone. `onLevel` receives the
 * peak amplitude of each captured chunk (roughly every 90 ms at 48 kHz) for
 * live waveform feedback.
 */
export class MicRecorder {
  private context: AudioContext | null = null;
  private stream: MediaStream | null = null;
  private source: MediaStreamAudioSourceNode | null = null;
  private processor: ScriptProcessorNode | null = null;
  private chunks: Float32Array[] = [];

  constructor(private readonly onLevel: (peak: number) => void) {}

  get recording(): boolean {
    return this.processor !== null;
  }

  async start(): Promise<void> {
    if (this.recording) return;
    let stream: MediaStream;
    try {
      stream = await navigator.mediaDevices.getUserMedia({
        audio: { echoCancellation: true, noiseSuppression: true },
      });
    } catch (error) {
      if (error instanceof DOMException && error.name === 'NotAllowedError') {
        throw new MicrophonePermissionError();
      }
      throw error;
    }
    this.stream = stream;
    this.context = new AudioContext();
    this.source = this.context.createMediaStreamSource(stream);
    this.chunks = [];
    const processor = this.context.createScriptProcessor(4096, 2, 1);
    processor.onaudioprocess = (event) => {
      const input = event.inputBuffer;
      const channels: Float32Array[] = [];
      for (let c = 0; c < input.numberOfChannels; c++) {
        channels.push(input.getChannelData(c).slice());
      }
      const mono = downmixToMono(channels);
      this.chunks.push(mono);
      let peak = 0;
      for (let i = 0; i < mono.length; i++) {
        const v = Math.abs(mono[i]!);
        if (v > peak) peak = v;
      }
      this.onLevel(peak);
    };
    this.source.connect(processor);
    // a ScriptProcessorNode only fires while connected to the destination
    processor.connect(this.context.destination);
    this.processor = processor;
  }

  /** Stop capturing and return everything recorded since start(). */
  async stop(): Promise<RawCapture> {
    const context = this.context;
    if (!context || !this.processor) {
      return { samples: new Float32Array(0), sampleRate: 16000 };
    }
    this.processor.disconnect();
    this.source?.disconnect();
    this.stream?.getTracks().forEach((track) => track.stop());
    const sampleRate = context.sampleRate;
    await context.close();
    const total = this.chunks.reduce((n, chunk) => n + chunk.length, 0);
    const samples = new Float32Array(total);
    let offset = 0;
    for (const chunk of this.chunks) {
      samples.set(chunk, offset);
      offset += chunk.length;
    }
    this.context = null;
    this.stream = null;
    this.source = null;
    this.processor = null;
    this.chunks = [];
    return { samples, sampleRate };
  }
}
