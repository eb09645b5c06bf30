/** Metrics panel: current report next to a pinned baseline.
 *
 * Values come straight from server reports. The only arithmetic here is
 * the ratio column, current over baseline per metric, which mirrors the
 * engine's own comparison table cell for cell (the tests hold the two
 * to exact equality). A zero baseline gets an empty ratio, never a
 * division result.
 */

import type { MetricsReport } from "./types.js";

export const RATIO_FIELDS = [
  ["mean_dP", "ratio_dP"],
  ["mean_dKE_J", "ratio_dKE"],
  ["mean_power_W", "ratio_power"],
  ["foot_slide_ratio", "ratio_foot_slide"],
] as const;

export interface MetricsRow {
  field: string;
  value: number;
  baseline: number | null;
  ratio: number | null;
}

export class MetricsPanel {
  current: MetricsReport | null = null;
  baseline: MetricsReport | null = null;

  setCurrent(report: MetricsReport | null): void {
    this.current = report;
  }

  pinBaseline(): void {
    this.baseline = this.current;
  }

  clearBaseline(): void {
    this.baseline = null;
  }

  rows(): MetricsRow[] {
    if (this.current === null) return [];
    const fields: (keyof MetricsReport)[] = [
      "mean_dP",
      "mean_dKE_J",
      "mean_power_W",
      "power_W_per_kg",
      "foot_slide_ratio",
    ];
    const ratioFor = new Set(RATIO_FIELDS.map(([field]) => field as string));
    return fields.map((field) => {
      const value = this.current![field] as number;
      const base = this.baseline === null ? null : (this.baseline[field] as number);
      let ratio: number | null = null;
      if (base !== null && base !== 0 && ratioFor.has(field)) {
        ratio = value / base;
      }
      return { field, value, baseline: base, ratio };
    });
  }
}

/** Table cell text; a missing ratio renders as a plain dash. */
export function formatRatio(ratio: number | null): string {
  return ratio === null ? "-" : ratio.toPrecision(4);
}
