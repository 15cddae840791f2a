// Scrolling amplitude-envelope display. Pure feedback for the person
// recording — none of this feeds the classifier.

/** Fixed-capacity scrolling buffer of amplitude peaks. */
export class EnvelopeBuffer {
  private readonly values: number[] = [];

  constructor(readonly capacity = 240) {
    if (capacity < 1) throw new Error('capacity must be at least 1');
  }

  push(peak: number): void {
    this.values.push(Math.max(0, Math.min(1, peak)));
    if (this.values.length > this.capacity) this.values.shift();
  }

  clear(): void {
    this.values.length = 0;
  }

  get frames(): readonly number[] {
    return this.values;
  }
}

/** Bars mirrored around the canvas midline, newest at the right edge. */
export function drawEnvelope(
  canvas: HTMLCanvasElement,
  frames: readonly number[],
  color = '#2f855a',
): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = '#d0d7d0';
  ctx.beginPath();
  ctx.moveTo(0, height / 2);
  ctx.lineTo(width, height / 2);
  ctx.stroke();
  if (frames.length === 0) return;
  const barWidth = Math.max(1, Math.floor(width / frames.length));
  ctx.fillStyle = color;
  for (let i = 0; i < frames.length; i++) {
    const bar = Math.max(1, frames[i]! * (height / 2 - 2));
    const x = width - (frames.length - i) * barWidth;
    ctx.fillRect(x, height / 2 - bar, barWidth - 1 || 1, bar * 2);
  }
}
