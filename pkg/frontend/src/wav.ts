// Capture post-processing: downmix, resample, and encode as the 16-bit PCM
// mono WAV the verification service accepts. Everything here is pure and
// DOM-free so it can be unit tested in node.

export const TARGET_RATE = 16000;

/** Average an array of equal-length channels into one. */
export function downmixToMono(channels: readonly Float32Array[]): Float32Array {
  if (channels.length === 0) throw new Error('no channels to downmix');
  const first = channels[0]!;
  if (channels.length === 1) return first.slice();
  const out = new Float32Array(first.length);
  for (const channel of channels) {
    if (channel.length !== first.length) {
      throw new Error('channel lengths differ');
    }
    for (let i = 0; i < out.length; i++) out[i]! += channel[i]!;
  }
  for (let i = 0; i < out.length; i++) out[i]! /= channels.length;
  return out;
}

/**
 * Linear-interpolation resampler. Output index i reads source position
 * i * from/to; the length is chosen so the last output still lands inside
 * the source, which makes an exact integer ratio come out exact
 * (48 kHz -> 16 kHz keeps every third sample).
 */
export function resampleLinear(
  samples: Float32Array,
  fromRate: number,
  toRate: number,
): Float32Array {
  if (fromRate <= 0 || toRate <= 0) throw new Error('rates must be positive');
  if (samples.length === 0) return new Float32Array(0);
  if (fromRate === toRate) return samples.slice();
  const length = Math.max(1, Math.floor(((samples.length - 1) * toRate) / fromRate) + 1);
  const out = new Float32Array(length);
  const step = fromRate / toRate;
  for (let i = 0; i < length; i++) {
    const position = i * step;
    const left = Math.floor(position);
    const right = Math.min(left + 1, samples.length - 1);
    const frac = position - left;
    out[i] = samples[left]! * (1 - frac) + samples[right]! * frac;
  }
  return out;
}

/** Clamp to [-1, 1] and scale to the signed 16-bit range. */
export function floatToPcm16(samples: Float32Array): Int16Array {
  const out = new Int16Array(samples.length);
  for (let i = 0; i < samples.length; i++) {
    const v = Math.max(-1, Math.min(1, samples[i]!));
    out[i] = Math.max(-32768, Math.min(32767, Math.round(v * 32767)));
  }
  return out;
}

/** 44-byte-header mono 16-bit PCM WAV. */
export function encodeWavPcm16(pcm: Int16Array, sampleRate: number): Uint8Array {
  const dataSize = pcm.length * 2;
  const buffer = new ArrayBuffer(44 + dataSize);
  const view = new DataView(buffer);
  const ascii = (offset: number, text: string) => {
    for (let i = 0; i < text.length; i++) view.setUint8(offset + i, text.charCodeAt(i));
  };
  ascii(0, 'RIFF');
  view.setUint32(4, 36 + dataSize, true);
  ascii(8, 'WAVE');
  ascii(12, 'fmt ');
  view.setUint32(16, 16, true); // fmt chunk size
  view.setUint16(20, 1, true); // PCM
  view.setUint16(22, 1, true); // mono
  view.setUint32(24, sampleRate, true);
  view.setUint32(28, sampleRate * 2, true); // byte rate
  view.setUint16(32, 2, true); // block align
  view.setUint16(34, 16, true); // bits per sample
  ascii(36, 'data');
  view.setUint32(40, dataSize, true);
  new Int16Array(buffer, 44).set(pcm);
  return new Uint8Array(buffer);
}

export function peakAmplitude(samples: Float32Array): number {
  let peak = 0;
  for (let i = 0; i < samples.length; i++) {
    const v = Math.abs(samples[i]!);
    if (v > peak) peak = v;
  }
  return peak;
}

/** Below this peak the capture is probably a muted or silent microphone. */
export const SILENCE_PEAK = 0.01;

export interface EncodedCapture {
  wav: Uint8Array;
  seconds: number;
  peak: number;
}

/** Full capture pipeline: downmix, resample to 16 kHz, encode. */
export function encodeCapture(
  channels: readonly Float32Array[],
  captureRate: number,
): EncodedCapture {
  const mono = downmixToMono(channels);
  const resampled = resampleLinear(mono, captureRate, TARGET_RATE);
  return {
    wav: encodeWavPcm16(floatToPcm16(resampled), TARGET_RATE),
    seconds: resampled.length / TARGET_RATE,
    peak: peakAmplitude(resampled),
  };
}
