/** Shared fixture plumbing for the editor tests. */

import rawExchanges from "./fixtures/exchanges.json";
import { FakeServer, stableStringify, type Exchange } from "./fakeServer.js";
import type { LibraryDoc, LibraryEntry } from "../src/types.js";

export const EXCHANGES = rawExchanges as Exchange[];
export const LIB_ID = "squat-only@v1";

export function makeServer(): FakeServer {
  return new FakeServer(EXCHANGES);
}

export function findExchange(pred: (ex: Exchange) => boolean): Exchange {
  const hit = EXCHANGES.find(pred);
  if (hit === undefined) throw new Error("no exchange matches");
  return hit;
}

export function libraryDoc(): LibraryDoc {
  return findExchange((e) => e.request.path === `/libraries/${LIB_ID}`).response.library;
}

export function entry(label: string): LibraryEntry {
  const hit = libraryDoc().entries.find((e) => e.label === label);
  if (hit === undefined) throw new Error(`no entry ${label}`);
  return hit;
}

function body(ex: Exchange): any {
  return ex.request.body as any;
}

export function synthStored(durationS: number): Exchange {
  return findExchange(
    (e) =>
      e.request.path === "/synthesize" &&
      body(e).coeffs.mode === "stored" &&
      body(e).duration_s === durationS,
  );
}

export function synthConst(values: number[]): Exchange {
  const want = stableStringify(values);
  return findExchange(
    (e) =>
      e.request.path === "/synthesize" &&
      body(e).coeffs.mode === "const" &&
      stableStringify(body(e).coeffs.values) === want,
  );
}

export function sequenceFixture(
  labels: string[],
  opts: { status?: number; blended?: boolean } = {},
): Exchange {
  const want = labels.join(",");
  return findExchange((e) => {
    if (e.request.path !== "/sequence" || e.status !== (opts.status ?? 200)) return false;
    const b = body(e);
    if (b.steps.map((s: any) => s.label).join(",") !== want) return false;
    if (opts.blended !== undefined && "transition" in b.steps[0] !== opts.blended) return false;
    return true;
  });
}

export function metricsCompare(): Exchange {
  return findExchange((e) => e.request.path === "/metrics");
}
