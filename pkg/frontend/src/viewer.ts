/** Playback state over a server-rendered result.
 *
 * The viewer keeps a frame cursor into the skeleton the engine already
 * computed; scrubbing and playback pick rows out of that data verbatim.
 */

import type { SynthesisResult } from "./types.js";

export class Viewer {
  result: SynthesisResult | null = null;
  cursor = 0;
  playing = false;
  speed = 1;
  loop = true;

  setResult(result: SynthesisResult | null): void {
    this.result = result;
    this.cursor = 0;
  }

  get frameCount(): number {
    return this.result === null ? 0 : this.result.skeleton.positions.length;
  }

  scrub(frame: number): void {
    const n = this.frameCount;
    if (n === 0) {
      this.cursor = 0;
      return;
    }
    this.cursor = Math.min(n - 1, Math.max(0, Math.round(frame)));
  }

  play(): void {
    this.playing = this.frameCount > 1;
  }

  pause(): void {
    this.playing = false;
  }

  /** Advance the cursor by wall-clock time at the trajectory's own rate. */
  tick(dtSeconds: number): void {
    if (!this.playing || this.result === null) return;
    const n = this.frameCount;
    const step = dtSeconds * this.result.trajectory.rate_hz * this.speed;
    let next = this.cursor + step;
    if (next >= n) {
      if (this.loop) {
        next = next % n;
      } else {
        next = n - 1;
        this.playing = false;
      }
    }
    this.cursor = Math.floor(next);
  }

  /** World points of every skeleton frame at the cursor, exactly as sent. */
  currentPose(): number[][] | null {
    if (this.result === null) return null;
    return this.result.skeleton.positions[this.cursor];
  }

  /** Generalized coordinates at the cursor, exactly as sent. */
  currentConfiguration(): number[] | null {
    if (this.result === null) return null;
    return this.result.trajectory.positions[this.cursor];
  }

  currentTime(): number | null {
    if (this.result === null) return null;
    return this.result.trajectory.times[this.cursor];
  }
}
