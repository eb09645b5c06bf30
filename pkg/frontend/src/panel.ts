/** Coefficient panel: one slider per synergy direction.
 *
 * Slider edits never touch motion data locally. Each change bumps the
 * state revision and schedules a synthesis request after a short quiet
 * period; at most one request is in flight, responses issued against a
 * superseded revision are discarded, and a failed request keeps the
 * last good result on screen next to the error text.
 */

import { ApiError, EngineClient } from "./api.js";
import type { LibraryEntry, SynthesisResult, SynthesizeBody } from "./types.js";

export const DEBOUNCE_MS = 100;

export interface PanelState {
  library: string;
  label: string;
  defaults: number[];
  sigma: number[];
  values: number[];
  duration_s: number;
  rate_hz: number;
}

export interface SliderSpec {
  min: number;
  max: number;
  value: number;
  default: number;
}

export function panelStateFromEntry(libraryId: string, entry: LibraryEntry): PanelState {
  return {
    library: libraryId,
    label: entry.label,
    defaults: [...entry.mean_coeffs],
    sigma: [...entry.sigma],
    values: [...entry.mean_coeffs],
    duration_s: entry.duration_s,
    rate_hz: 100,
  };
}

export function sliderSpecs(state: PanelState): SliderSpec[] {
  return state.values.map((value, i) => ({
    min: -2 * state.sigma[i],
    max: 2 * state.sigma[i],
    value,
    default: state.defaults[i],
  }));
}

/** At defaults the panel replays the stored coefficient series; any
 * deviation switches to a constant schedule at the slider values. */
export function synthesizeBody(state: PanelState): SynthesizeBody {
  const atDefaults = state.values.every((v, i) => v === state.defaults[i]);
  return {
    library: state.library,
    label: state.label,
    coeffs: atDefaults ? { mode: "stored" } : { mode: "const", values: [...state.values] },
    duration_s: state.duration_s,
    rate_hz: state.rate_hz,
  };
}

export class CoefficientPanel {
  readonly state: PanelState;
  lastGood: SynthesisResult | null = null;
  lastError: string | null = null;
  onUpdate: (panel: CoefficientPanel) => void = () => {};

  private revision = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private rerun = false;
  private current: Promise<void> = Promise.resolve();

  constructor(
    private readonly client: EngineClient,
    state: PanelState,
    private readonly debounceMs: number = DEBOUNCE_MS,
  ) {
    this.state = state;
  }

  setSlider(index: number, value: number): void {
    if (index < 0 || index >= this.state.values.length) {
      throw new RangeError(`slider index ${index} out of range`);
    }
    const limit = 2 * this.state.sigma[index];
    this.state.values[index] = Math.min(limit, Math.max(-limit, value));
    this.touch();
  }

  resetSliders(): void {
    this.state.values = [...this.state.defaults];
    this.touch();
  }

  setDuration(seconds: number): void {
    if (!(seconds > 0)) throw new RangeError("duration must be positive");
    this.state.duration_s = seconds;
    this.touch();
  }

  setRate(hz: number): void {
    if (!(hz > 0)) throw new RangeError("rate must be positive");
    this.state.rate_hz = hz;
    this.touch();
  }

  private touch(): void {
    this.revision += 1;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.issue();
    }, this.debounceMs);
  }

  /** Send the current state now. Safe to call while a request is in
   * flight: it flags a rerun instead of opening a second request. */
  issue(): Promise<void> {
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
      const result = await this.client.synthesize(synthesizeBody(this.state));
      if (this.revision === issuedAt) {
        // hash equality means nothing visible changed; skip the swap
        if (this.lastGood === null || this.lastGood.content_hash !== result.content_hash) {
          this.lastGood = result;
        }
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

  /** Promise of the most recently opened request chain. */
  get busy(): Promise<void> {
    return this.current;
  }

  /** Drop a scheduled request without sending it. */
  cancelPending(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  /** Resolve once no request or debounce timer is pending. */
  async settle(): Promise<void> {
    while (this.timer !== null || this.inFlight) {
      if (this.timer !== null) {
        clearTimeout(this.timer);
        this.timer = null;
        this.issue();
      }
      await this.current;
    }
  }
}
