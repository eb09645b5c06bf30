/** Browser entry point: builds the editor UI and draws the skeleton.
 *
 * Everything numeric on screen is copied out of server responses; this
 * file only lays out controls and projects pose points onto the canvas.
 */

import { EngineClient, fetchTransport } from "./api.js";
import { formatRatio } from "./metrics.js";
import { sliderSpecs, type CoefficientPanel } from "./panel.js";
import { EditorSession } from "./session.js";

const SERVER = (window as any).SYNSCULPT_SERVER ?? "http://127.0.0.1:8080";
const LIBRARY = (window as any).SYNSCULPT_LIBRARY ?? "squat-only@v1";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function drawPose(canvas: HTMLCanvasElement, session: EditorSession): void {
  const ctx = canvas.getContext("2d");
  if (ctx === null) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const pose = session.viewer.currentPose();
  const result = session.viewer.result;
  if (pose === null || result === null) return;
  // orthographic side view: world x right, world z up, centered on the base
  const scale = 140;
  const cx = canvas.width / 2 - pose[0][0] * scale;
  const cy = canvas.height - 40;
  const px = (p: number[]) => cx + p[0] * scale;
  const py = (p: number[]) => cy - p[2] * scale;
  ctx.strokeStyle = "#2b6cb0";
  ctx.lineWidth = 2;
  for (const [a, b] of result.skeleton.edges) {
    ctx.beginPath();
    ctx.moveTo(px(pose[a]), py(pose[a]));
    ctx.lineTo(px(pose[b]), py(pose[b]));
    ctx.stroke();
  }
  ctx.fillStyle = "#1a202c";
  for (const p of pose) {
    ctx.beginPath();
    ctx.arc(px(p), py(p), 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function renderSliders(root: HTMLElement, panel: CoefficientPanel): void {
  root.replaceChildren();
  sliderSpecs(panel.state).forEach((spec, i) => {
    const row = el("div", "slider-row");
    const label = el("label", undefined, `a${i + 1}`);
    const input = el("input") as HTMLInputElement;
    input.type = "range";
    input.min = String(spec.min);
    input.max = String(spec.max);
    input.step = "any";
    input.value = String(spec.value);
    const readout = el("span", "readout", spec.value.toPrecision(4));
    input.addEventListener("input", () => {
      panel.setSlider(i, Number(input.value));
      readout.textContent = Number(input.value).toPrecision(4);
    });
    row.append(label, input, readout);
    root.append(row);
  });
}

function renderMetrics(table: HTMLTableElement, session: EditorSession): void {
  table.replaceChildren();
  const head = el("tr");
  for (const h of ["metric", "current", "baseline", "ratio"]) head.append(el("th", undefined, h));
  table.append(head);
  for (const row of session.metrics.rows()) {
    const tr = el("tr");
    tr.append(el("td", undefined, row.field));
    tr.append(el("td", undefined, row.value.toPrecision(5)));
    tr.append(el("td", undefined, row.baseline === null ? "-" : row.baseline.toPrecision(5)));
    tr.append(el("td", undefined, formatRatio(row.ratio)));
    table.append(tr);
  }
}

function renderTimeline(list: HTMLElement, session: EditorSession, redraw: () => void): void {
  list.replaceChildren();
  session.timeline.steps.forEach((step, i) => {
    const row = el("div", "step-row");
    row.append(el("span", undefined, `${i + 1}. ${step.label} (${step.duration_s.toFixed(2)} s)`));
    const up = el("button", undefined, "up");
    up.disabled = i === 0;
    up.addEventListener("click", () => {
      session.timeline.moveStep(i, i - 1);
      redraw();
    });
    const down = el("button", undefined, "down");
    down.disabled = i === session.timeline.steps.length - 1;
    down.addEventListener("click", () => {
      session.timeline.moveStep(i, i + 1);
      redraw();
    });
    const drop = el("button", undefined, "remove");
    drop.addEventListener("click", () => {
      session.timeline.removeStep(i);
      redraw();
    });
    row.append(up, down, drop);
    list.append(row);
  });
}

async function boot(): Promise<void> {
  const session = new EditorSession(new EngineClient(fetchTransport(SERVER)));
  const app = document.getElementById("app")!;
  const status = el("div", "status", "loading model...");
  app.append(status);
  try {
    await session.open(LIBRARY);
  } catch (err) {
    status.textContent = `cannot reach engine at ${SERVER}: ${err}`;
    return;
  }
  status.remove();

  const left = el("div", "pane");
  const right = el("div", "pane");
  app.append(left, right);

  const canvas = el("canvas") as HTMLCanvasElement;
  canvas.width = 560;
  canvas.height = 420;
  const scrub = el("input") as HTMLInputElement;
  scrub.type = "range";
  scrub.min = "0";
  scrub.value = "0";
  const playBtn = el("button", undefined, "play");
  const timeLabel = el("span", "readout", "0.00 s");
  const errorLine = el("div", "error");
  right.append(canvas, el("div", "transport"), errorLine);
  const transport = right.children[1];
  transport.append(playBtn, scrub, timeLabel);

  const metricsTable = el("table") as HTMLTableElement;
  const pinBtn = el("button", undefined, "pin baseline");
  pinBtn.addEventListener("click", () => {
    session.metrics.pinBaseline();
    renderMetrics(metricsTable, session);
  });

  const sliderBox = el("div", "sliders");
  const entryPick = el("select") as HTMLSelectElement;
  for (const entry of session.entries()) {
    const opt = el("option", undefined, entry.label) as HTMLOptionElement;
    opt.value = entry.label;
    entryPick.append(opt);
  }
  const resetBtn = el("button", undefined, "reset sliders");

  const stepPick = el("select") as HTMLSelectElement;
  for (const entry of session.entries()) {
    const opt = el("option", undefined, entry.label) as HTMLOptionElement;
    opt.value = entry.label;
    stepPick.append(opt);
  }
  const addStep = el("button", undefined, "add step");
  const renderBtn = el("button", undefined, "render sequence");
  const stepList = el("div", "steps");

  left.append(
    el("h2", undefined, "synergy"),
    entryPick,
    sliderBox,
    resetBtn,
    el("h2", undefined, "timeline"),
    stepPick,
    addStep,
    renderBtn,
    stepList,
    el("h2", undefined, "metrics"),
    pinBtn,
    metricsTable,
  );

  const redraw = () => {
    scrub.max = String(Math.max(0, session.viewer.frameCount - 1));
    scrub.value = String(session.viewer.cursor);
    const t = session.viewer.currentTime();
    timeLabel.textContent = t === null ? "" : `${t.toFixed(2)} s`;
    const err = session.panel?.lastError ?? session.timeline.lastError;
    errorLine.textContent = err ?? "";
    renderMetrics(metricsTable, session);
    renderTimeline(stepList, session, redraw);
    drawPose(canvas, session);
  };

  const pick = (label: string) => {
    const panel = session.selectEntry(label);
    const inner = panel.onUpdate;
    panel.onUpdate = (p) => {
      inner(p);
      redraw();
    };
    renderSliders(sliderBox, panel);
    panel.issue();
  };
  entryPick.addEventListener("change", () => pick(entryPick.value));
  resetBtn.addEventListener("click", () => {
    session.panel?.resetSliders();
    if (session.panel) renderSliders(sliderBox, session.panel);
  });
  addStep.addEventListener("click", () => {
    session.addTimelineStep(stepPick.value);
    redraw();
  });
  renderBtn.addEventListener("click", () => {
    void session.timeline.render();
  });
  const timelineWiring = session.timeline.onUpdate;
  session.timeline.onUpdate = (t) => {
    timelineWiring(t);
    redraw();
  };
  playBtn.addEventListener("click", () => {
    if (session.viewer.playing) {
      session.viewer.pause();
      playBtn.textContent = "play";
    } else {
      session.viewer.play();
      playBtn.textContent = "pause";
    }
  });
  scrub.addEventListener("input", () => {
    session.viewer.scrub(Number(scrub.value));
    session.viewer.pause();
    redraw();
  });

  let last = performance.now();
  const frame = (now: number) => {
    if (session.viewer.playing) {
      session.viewer.tick((now - last) / 1000);
      scrub.value = String(session.viewer.cursor);
      const t = session.viewer.currentTime();
      timeLabel.textContent = t === null ? "" : `${t.toFixed(2)} s`;
      drawPose(canvas, session);
    }
    last = now;
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);

  if (session.entries().length > 0) pick(session.entries()[0].label);
}

void boot();
