/** Editor session: one model, one library snapshot, linked panels.
 *
 * Wires the coefficient panel and timeline into the shared viewer and
 * metrics panel so the most recent good server result is what plays.
 */

import { EngineClient } from "./api.js";
import { MetricsPanel } from "./metrics.js";
import { CoefficientPanel, panelStateFromEntry } from "./panel.js";
import { Timeline } from "./timeline.js";
import { Viewer } from "./viewer.js";
import type { LibraryDoc, LibraryEntry, ModelInfo } from "./types.js";

export class EditorSession {
  model: ModelInfo | null = null;
  libraryId: string | null = null;
  library: LibraryDoc | null = null;
  panel: CoefficientPanel | null = null;
  readonly timeline: Timeline;
  readonly viewer = new Viewer();
  readonly metrics = new MetricsPanel();

  constructor(readonly client: EngineClient) {
    this.timeline = new Timeline(client);
    this.timeline.onUpdate = (t) => {
      if (t.lastGood !== null && t.lastError === null) {
        this.viewer.setResult(t.lastGood);
        this.metrics.setCurrent(t.lastGood.metrics ?? null);
      }
    };
  }

  async open(libraryId: string): Promise<void> {
    this.model = await this.client.getModel();
    const resp = await this.client.getLibrary(libraryId);
    this.libraryId = resp.id;
    this.library = resp.library;
  }

  entries(): LibraryEntry[] {
    return this.library === null ? [] : this.library.entries;
  }

  findEntry(label: string): LibraryEntry {
    const entry = this.entries().find((e) => e.label === label);
    if (entry === undefined) throw new Error(`no entry labeled ${label}`);
    return entry;
  }

  /** Build a fresh panel for one synergy; sliders start at the stored
   * coefficient means so the first render replays the source motion. */
  selectEntry(label: string): CoefficientPanel {
    if (this.libraryId === null) throw new Error("open a library first");
    const entry = this.findEntry(label);
    const panel = new CoefficientPanel(this.client, panelStateFromEntry(this.libraryId, entry));
    panel.onUpdate = (p) => {
      if (p.lastGood !== null) {
        this.viewer.setResult(p.lastGood);
        this.metrics.setCurrent(p.lastGood.metrics ?? null);
      }
    };
    this.panel = panel;
    return panel;
  }

  addTimelineStep(label: string, durationS?: number): void {
    if (this.libraryId === null) throw new Error("open a library first");
    const entry = this.findEntry(label);
    this.timeline.addStep({
      library: this.libraryId,
      label: entry.label,
      coeffs: { mode: "stored" },
      duration_s: durationS ?? entry.duration_s,
      blend_window_s: null,
    });
  }
}
