import { beforeEach, describe, expect, it } from "vitest";

import { Viewer } from "../src/viewer.js";
import type { SynthesisResult } from "../src/types.js";
import { entry, synthStored } from "./helpers.js";

const result = synthStored(0.6).response as SynthesisResult;

describe("scrubbing", () => {
  let viewer: Viewer;
  beforeEach(() => {
    viewer = new Viewer();
    viewer.setResult(result);
  });

  it("starts at frame zero with the first server pose", () => {
    expect(viewer.cursor).toBe(0);
    expect(viewer.frameCount).toBe(result.skeleton.positions.length);
    expect(Object.is(viewer.currentPose(), result.skeleton.positions[0])).toBe(true);
  });

  it("clamps the cursor to the frame range", () => {
    viewer.scrub(-5);
    expect(viewer.cursor).toBe(0);
    viewer.scrub(10_000);
    expect(viewer.cursor).toBe(viewer.frameCount - 1);
    viewer.scrub(17.4);
    expect(viewer.cursor).toBe(17);
  });

  it("hands out pose, configuration, and time rows verbatim", () => {
    viewer.scrub(30);
    expect(Object.is(viewer.currentPose(), result.skeleton.positions[30])).toBe(true);
    expect(Object.is(viewer.currentConfiguration(), result.trajectory.positions[30])).toBe(true);
    expect(viewer.currentTime()).toBe(result.trajectory.times[30]);
  });

  it("resets the cursor when a new result arrives", () => {
    viewer.scrub(40);
    viewer.setResult(result);
    expect(viewer.cursor).toBe(0);
  });
});

describe("playback", () => {
  it("advances the cursor at the trajectory rate", () => {
    const viewer = new Viewer();
    viewer.setResult(result);
    viewer.play();
    expect(viewer.playing).toBe(true);
    viewer.tick(0.1);
    expect(viewer.cursor).toBe(10);
    viewer.speed = 2;
    viewer.tick(0.1);
    expect(viewer.cursor).toBe(30);
  });

  it("loops past the end and stops when looping is off", () => {
    const viewer = new Viewer();
    viewer.setResult(result);
    viewer.play();
    viewer.tick(10);
    expect(viewer.playing).toBe(true);
    expect(viewer.cursor).toBeLessThan(viewer.frameCount);

    viewer.loop = false;
    viewer.scrub(viewer.frameCount - 2);
    viewer.play();
    viewer.tick(10);
    expect(viewer.cursor).toBe(viewer.frameCount - 1);
    expect(viewer.playing).toBe(false);
  });

  it("does nothing while paused or empty", () => {
    const viewer = new Viewer();
    viewer.tick(1);
    expect(viewer.currentPose()).toBeNull();
    viewer.setResult(result);
    viewer.tick(1);
    expect(viewer.cursor).toBe(0);
  });
});

describe("frame payload shape", () => {
  it("one point per named frame, edges inside range", () => {
    const skel = result.skeleton;
    expect(skel.positions).toHaveLength(result.trajectory.n_frames);
    for (const frame of [skel.positions[0], skel.positions.at(-1)!]) {
      expect(frame).toHaveLength(skel.names.length);
    }
    for (const [a, b] of skel.edges) {
      expect(a).toBeGreaterThanOrEqual(0);
      expect(b).toBeLessThan(skel.names.length);
    }
    expect(entry("squat-01").q0).toHaveLength(result.trajectory.positions[0].length);
  });
});
