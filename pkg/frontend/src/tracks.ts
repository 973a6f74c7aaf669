/**
 * Keyframe tracks: a sparse set of (frame, transform) keys expanded to one
 * transform per frame. Intermediate frames interpolate each component
 * linearly; rotation interpolates the angle itself, not the matrix.
 */

import { IDENTITY, TransformDoc } from "./sceneModel.js";

export interface Keyframe {
  frame: number;
  transform: TransformDoc;
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

function interpolate(a: TransformDoc, b: TransformDoc, t: number): TransformDoc {
  return {
    tx: lerp(a.tx, b.tx, t),
    ty: lerp(a.ty, b.ty, t),
    rot: lerp(a.rot, b.rot, t),
    scale: lerp(a.scale, b.scale, t),
  };
}

/** Transform at `frame`: clamped at the ends, linear between keys. */
export function sampleTrack(keys: Keyframe[], frame: number): TransformDoc {
  if (keys.length === 0) return { ...IDENTITY };
  const sorted = [...keys].sort((a, b) => a.frame - b.frame);
  const first = sorted[0]!;
  const last = sorted[sorted.length - 1]!;
  if (frame <= first.frame) return { ...first.transform };
  if (frame >= last.frame) return { ...last.transform };
  for (let i = 1; i < sorted.length; i++) {
    const hi = sorted[i]!;
    if (frame <= hi.frame) {
      const lo = sorted[i - 1]!;
      if (hi.frame === lo.frame) return { ...hi.transform };
      const t = (frame - lo.frame) / (hi.frame - lo.frame);
      return interpolate(lo.transform, hi.transform, t);
    }
  }
  return { ...last.transform };
}

/** Dense per-frame track of length `frameCount`. */
export function buildTrack(keys: Keyframe[], frameCount: number): TransformDoc[] {
  const out: TransformDoc[] = [];
  for (let f = 0; f < frameCount; f++) out.push(sampleTrack(keys, f));
  return out;
}

/** Insert or replace the key at `frame`. Returns a new array. */
export function setKey(
  keys: Keyframe[],
  frame: number,
  transform: TransformDoc,
): Keyframe[] {
  const rest = keys.filter((k) => k.frame !== frame);
  return [...rest, { frame, transform }].sort((a, b) => a.frame - b.frame);
}

export function deleteKey(keys: Keyframe[], frame: number): Keyframe[] {
  return keys.filter((k) => k.frame !== frame);
}
