import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import {
  LivePreview,
  PreviewTransport,
  ScenePostResult,
  flowPreviewUrl,
  noisePreviewUrl,
} from "../src/preview.js";

interface Deferred {
  text: string;
  resolve: (r: ScenePostResult) => void;
  reject: (e: unknown) => void;
}

function manualTransport(): { transport: PreviewTransport; calls: Deferred[] } {
  const calls: Deferred[] = [];
  return {
    calls,
    transport: {
      postScene(text: string) {
        return new Promise<ScenePostResult>((resolve, reject) => {
          calls.push({ text, resolve, reject });
        });
      },
    },
  };
}

function collector() {
  const scenes: string[] = [];
  const errors: string[] = [];
  return {
    scenes,
    errors,
    callbacks: {
      onScene: (id: string) => scenes.push(id),
      onError: (m: string) => errors.push(m),
    },
  };
}

beforeEach(() => vi.useFakeTimers());
afterEach(() => vi.useRealTimers());

describe("LivePreview", () => {
  it("debounces rapid edits into a single request", () => {
    const { transport, calls } = manualTransport();
    const { callbacks } = collector();
    const preview = new LivePreview(transport, callbacks, 250);
    preview.update("a");
    vi.advanceTimersByTime(100);
    preview.update("b");
    vi.advanceTimersByTime(100);
    preview.update("c");
    expect(calls).toHaveLength(0);
    vi.advanceTimersByTime(250);
    expect(calls).toHaveLength(1);
    expect(calls[0]!.text).toBe("c");
  });

  it("drops stale responses so only the newest renders", async () => {
    const { transport, calls } = manualTransport();
    const { scenes, callbacks } = collector();
    const preview = new LivePreview(transport, callbacks, 250);
    preview.update("first");
    vi.advanceTimersByTime(250);
    preview.update("second");
    vi.advanceTimersByTime(250);
    expect(calls).toHaveLength(2);
    // the newer request resolves before the older one
    calls[1]!.resolve({ id: "new", frames: 3, flow_count: 2 });
    await Promise.resolve();
    calls[0]!.resolve({ id: "old", frames: 3, flow_count: 2 });
    await Promise.resolve();
    expect(scenes).toEqual(["new"]);
  });

  it("keeps editing alive on transport failure", async () => {
    const { transport, calls } = manualTransport();
    const { scenes, errors, callbacks } = collector();
    const preview = new LivePreview(transport, callbacks, 250);
    preview.update("x");
    vi.advanceTimersByTime(250);
    calls[0]!.reject(new Error("connection refused"));
    await Promise.resolve();
    expect(errors).toHaveLength(1);
    expect(errors[0]).toMatch(/connection refused/);
    // a later edit still goes through
    preview.update("y");
    vi.advanceTimersByTime(250);
    calls[1]!.resolve({ id: "ok", frames: 2, flow_count: 1 });
    await Promise.resolve();
    expect(scenes).toEqual(["ok"]);
  });

  it("errors from superseded requests are suppressed", async () => {
    const { transport, calls } = manualTransport();
    const { scenes, errors, callbacks } = collector();
    const preview = new LivePreview(transport, callbacks, 250);
    preview.update("a");
    vi.advanceTimersByTime(250);
    preview.update("b");
    vi.advanceTimersByTime(250);
    calls[1]!.resolve({ id: "b", frames: 2, flow_count: 1 });
    await Promise.resolve();
    calls[0]!.reject(new Error("late failure"));
    await Promise.resolve();
    expect(scenes).toEqual(["b"]);
    expect(errors).toHaveLength(0);
  });

  it("flush bypasses the debounce", () => {
    const { transport, calls } = manualTransport();
    const { callbacks } = collector();
    const preview = new LivePreview(transport, callbacks, 250);
    preview.update("now");
    preview.flush();
    expect(calls).toHaveLength(1);
  });
});

describe("url helpers", () => {
  it("builds service preview urls", () => {
    expect(flowPreviewUrl("http://h:1", "abc", 3))
      .toBe("http://h:1/scenes/abc/flow-preview/3");
    expect(noisePreviewUrl("http://h:1", "j", 0))
      .toBe("http://h:1/jobs/j/preview/0");
  });
});
