/**
 * Editor state and actions for the cut-and-drag authoring tool.
 *
 * The state always exports a valid scene document: polygon closes with
 * fewer than 3 vertices or self-intersections are rejected with a message
 * and leave the state untouched. Undo/redo restore byte-identical
 * snapshots of the serialized state.
 */

import { isSelfIntersecting, polygonArea } from "./polygon.js";
import {
  IDENTITY,
  Point,
  SceneDoc,
  TransformDoc,
  parseScene,
  serializeScene,
} from "./sceneModel.js";
import { Keyframe, buildTrack, setKey } from "./tracks.js";

export interface EditorLayer {
  polygon: Point[];
  keys: Keyframe[];
}

export interface EditorState {
  canvasH: number;
  canvasW: number;
  frames: number;
  layers: EditorLayer[];
  backgroundKeys: Keyframe[];
  draft: Point[]; // open polygon under construction
  selectedLayer: number | null;
  previewFrame: number;
}

export interface ActionResult {
  ok: boolean;
  message?: string;
}

export function initialState(h: number, w: number, frames: number): EditorState {
  return {
    canvasH: h,
    canvasW: w,
    frames,
    layers: [],
    backgroundKeys: [],
    draft: [],
    selectedLayer: null,
    previewFrame: 0,
  };
}

/** Canonical snapshot of the full editor state, used by undo/redo. */
export function serializeState(state: EditorState): string {
  return JSON.stringify(state);
}

export function exportDocument(state: EditorState): SceneDoc {
  const doc: SceneDoc = {
    canvas: { h: state.canvasH, w: state.canvasW },
    frames: state.frames,
    layers: state.layers.map((layer) => ({
      polygon: layer.polygon.map(([x, y]) => [x, y] as Point),
      track: buildTrack(layer.keys, state.frames),
    })),
  };
  if (state.backgroundKeys.length > 0) {
    doc.background = { track: buildTrack(state.backgroundKeys, state.frames) };
  }
  return doc;
}

export function exportText(state: EditorState): string {
  return serializeScene(exportDocument(state));
}

/** Rebuild an editor state from a scene document (dense keyframes). */
export function importDocument(doc: SceneDoc): EditorState {
  return {
    canvasH: doc.canvas.h,
    canvasW: doc.canvas.w,
    frames: doc.frames,
    layers: doc.layers.map((layer) => ({
      polygon: layer.polygon.map(([x, y]) => [x, y] as Point),
      keys: layer.track.map((transform, frame) => ({ frame, transform })),
    })),
    backgroundKeys: doc.background
      ? doc.background.track.map((transform, frame) => ({ frame, transform }))
      : [],
    draft: [],
    selectedLayer: doc.layers.length > 0 ? 0 : null,
    previewFrame: 0,
  };
}

export function importText(text: string): EditorState {
  return importDocument(parseScene(text));
}

export class Editor {
  state: EditorState;
  private past: string[] = [];
  private future: string[] = [];

  constructor(state: EditorState) {
    this.state = state;
  }

  private commit(next: EditorState): ActionResult {
    this.past.push(serializeState(this.state));
    this.future = [];
    this.state = next;
    return { ok: true };
  }

  undo(): boolean {
    const prev = this.past.pop();
    if (prev === undefined) return false;
    this.future.push(serializeState(this.state));
    this.state = JSON.parse(prev) as EditorState;
    return true;
  }

  redo(): boolean {
    const next = this.future.pop();
    if (next === undefined) return false;
    this.past.push(serializeState(this.state));
    this.state = JSON.parse(next) as EditorState;
    return true;
  }

  addVertex(p: Point): ActionResult {
    return this.commit({ ...this.state, draft: [...this.state.draft, p] });
  }

  dragDraftVertex(index: number, p: Point): ActionResult {
    if (index < 0 || index >= this.state.draft.length) {
      return { ok: false, message: "no such draft vertex" };
    }
    const draft = this.state.draft.map((v, i) => (i === index ? p : v));
    return this.commit({ ...this.state, draft });
  }

  dragLayerVertex(layer: number, index: number, p: Point): ActionResult {
    const target = this.state.layers[layer];
    if (target === undefined || index < 0 || index >= target.polygon.length) {
      return { ok: false, message: "no such vertex" };
    }
    const moved = target.polygon.map((v, i) => (i === index ? p : v));
    if (isSelfIntersecting(moved) || polygonArea(moved) === 0) {
      return { ok: false, message: "move would self-intersect the polygon" };
    }
    const layers = this.state.layers.map((l, i) =>
      i === layer ? { ...l, polygon: moved } : l,
    );
    return this.commit({ ...this.state, layers });
  }

  closePolygon(): ActionResult {
    const draft = this.state.draft;
    if (draft.length < 3) {
      return { ok: false, message: "a polygon needs at least 3 vertices" };
    }
    if (isSelfIntersecting(draft) || polygonArea(draft) === 0) {
      return { ok: false, message: "polygon is self-intersecting or degenerate" };
    }
    const layer: EditorLayer = { polygon: draft, keys: [] };
    return this.commit({
      ...this.state,
      layers: [...this.state.layers, layer],
      draft: [],
      selectedLayer: this.state.layers.length,
    });
  }

  deleteLayer(index: number): ActionResult {
    if (index < 0 || index >= this.state.layers.length) {
      return { ok: false, message: "no such layer" };
    }
    const layers = this.state.layers.filter((_, i) => i !== index);
    return this.commit({ ...this.state, layers, selectedLayer: null });
  }

  setKeyframe(layer: number, frame: number, partial: Partial<TransformDoc>): ActionResult {
    if (layer < 0 || layer >= this.state.layers.length) {
      return { ok: false, message: "no such layer" };
    }
    if (frame < 0 || frame >= this.state.frames) {
      return { ok: false, message: `frame must lie in [0, ${this.state.frames})` };
    }
    const transform = { ...IDENTITY, ...partial };
    if (!(transform.scale > 0) || !Number.isFinite(transform.scale)) {
      return { ok: false, message: "scale must be > 0" };
    }
    const layers = this.state.layers.map((l, i) =>
      i === layer ? { ...l, keys: setKey(l.keys, frame, transform) } : l,
    );
    return this.commit({ ...this.state, layers });
  }

  setBackgroundKeyframe(frame: number, partial: Partial<TransformDoc>): ActionResult {
    if (frame < 0 || frame >= this.state.frames) {
      return { ok: false, message: `frame must lie in [0, ${this.state.frames})` };
    }
    const transform = { ...IDENTITY, ...partial };
    if (!(transform.scale > 0) || !Number.isFinite(transform.scale)) {
      return { ok: false, message: "scale must be > 0" };
    }
    return this.commit({
      ...this.state,
      backgroundKeys: setKey(this.state.backgroundKeys, frame, transform),
    });
  }

  setPreviewFrame(frame: number): ActionResult {
    if (frame < 0 || frame >= this.state.frames) {
      return { ok: false, message: "frame out of range" };
    }
    return this.commit({ ...this.state, previewFrame: frame });
  }
}
