/** Sequence timeline: ordered steps rendered server-side on demand.
 *
 * Reordering, duration edits, and blend windows only mutate the plan;
 * nothing is recomputed locally. Render posts the plan and either swaps
 * in the returned trajectory or surfaces the server's rejection (a too
 * wide blend window comes back as a 422) while keeping the last good
 * render.
 */

import { ApiError, EngineClient } from "./api.js";
import type { CoeffSchedule, SequenceBody, SynthesisResult } from "./types.js";

export interface TimelineStep {
  library: string;
  label: string;
  coeffs: CoeffSchedule;
  duration_s: number;
  blend_window_s: number | null;
}

export function makeStep(
  library: string,
  label: string,
  duration_s: number,
  coeffs: CoeffSchedule = { mode: "stored" },
): TimelineStep {
  if (!(duration_s > 0)) throw new RangeError("duration must be positive");
  return { library, label, coeffs, duration_s, blend_window_s: null };
}

export function sequenceBody(steps: readonly TimelineStep[], rateHz: number): SequenceBody {
  return {
    rate_hz: rateHz,
    steps: steps.map((s) => ({
      library: s.library,
      label: s.label,
      coeffs: s.coeffs,
      duration_s: s.duration_s,
      ...(s.blend_window_s === null
        ? {}
        : { transition: { kind: "linear-blend" as const, window_s: s.blend_window_s } }),
    })),
  };
}

export class Timeline {
  steps: TimelineStep[] = [];
  rate_hz = 100;
  lastGood: SynthesisResult | null = null;
  lastError: string | null = null;
  onUpdate: (timeline: Timeline) => void = () => {};

  private revision = 0;
  private inFlight = false;
  private rerun = false;
  private current: Promise<void> = Promise.resolve();

  constructor(private readonly client: EngineClient) {}

  addStep(step: TimelineStep): void {
    this.steps.push(step);
    this.revision += 1;
  }

  removeStep(index: number): void {
    this.checkIndex(index);
    this.steps.splice(index, 1);
    this.revision += 1;
  }

  moveStep(from: number, to: number): void {
    this.checkIndex(from);
    this.checkIndex(to);
    const [step] = this.steps.splice(from, 1);
    this.steps.splice(to, 0, step);
    this.revision += 1;
  }

  setDuration(index: number, seconds: number): void {
    this.checkIndex(index);
    if (!(seconds > 0)) throw new RangeError("duration must be positive");
    this.steps[index].duration_s = seconds;
    this.revision += 1;
  }

  setBlendWindow(index: number, windowS: number | null): void {
    this.checkIndex(index);
    if (windowS !== null && !(windowS > 0)) {
      throw new RangeError("blend window must be positive");
    }
    this.steps[index].blend_window_s = windowS;
    this.revision += 1;
  }

  render(): Promise<void> {
    if (this.steps.length === 0) {
      throw new Error("timeline has no steps");
    }
    if (this.inFlight) {
      this.rerun = true;
      return this.current;
    }
    this.current = this.run();
    return this.current;
  }

  private async run(): Promise<void> {
    this.inFlight = true;
    const issuedAt = this.revision;
    try {
      const result = await this.client.sequence(sequenceBody(this.steps, this.rate_hz));
      if (this.revision === issuedAt) {
        this.lastGood = result;
        this.lastError = null;
      }
    } catch (err) {
      if (!(err instanceof ApiError)) throw err;
      if (this.revision === issuedAt) this.lastError = err.message;
    } finally {
      this.inFlight = false;
      if (this.rerun) {
        this.rerun = false;
        this.current = this.run();
      }
      this.onUpdate(this);
    }
  }

  async settle(): Promise<void> {
    while (this.inFlight) await this.current;
  }

  private checkIndex(index: number): void {
    if (index < 0 || index >= this.steps.length) {
      throw new RangeError(`step index ${index} out of range`);
    }
  }
}
