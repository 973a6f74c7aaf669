/**
 * Scene document model shared with the warping service.
 *
 * The JSON layout mirrors the service contract exactly:
 * {"canvas": {"h", "w"}, "frames", "layers": [{"polygon": [[x, y], ...],
 *  "track": [{"tx", "ty", "rot", "scale"}, ...]}], "background": {"track":
 *  [...]}}. Serialization uses a fixed key order so export -> import ->
 * export is byte-identical.
 */

import { z } from "zod";

export interface TransformDoc {
  tx: number;
  ty: number;
  rot: number;
  scale: number;
}

export type Point = [number, number];

export interface LayerDoc {
  polygon: Point[];
  track: TransformDoc[];
}

export interface SceneDoc {
  canvas: { h: number; w: number };
  frames: number;
  layers: LayerDoc[];
  background?: { track: TransformDoc[] };
}

export const IDENTITY: TransformDoc = { tx: 0, ty: 0, rot: 0, scale: 1 };

const transformSchema = z.object({
  tx: z.number().finite(),
  ty: z.number().finite(),
  rot: z.number().finite(),
  scale: z.number().finite().positive(),
});

const pointSchema = z.tuple([z.number().finite(), z.number().finite()]);

const sceneSchema = z
  .object({
    canvas: z.object({
      h: z.number().int().positive(),
      w: z.number().int().positive(),
    }),
    frames: z.number().int().min(2),
    layers: z
      .array(
        z.object({
          polygon: z.array(pointSchema).min(3),
          track: z.array(transformSchema),
        }),
      )
      .default([]),
    background: z.object({ track: z.array(transformSchema) }).optional(),
  })
  .superRefine((doc, ctx) => {
    doc.layers.forEach((layer, i) => {
      if (layer.track.length !== doc.frames) {
        ctx.addIssue({
          code: z.ZodIssueCode.custom,
          message: `layer ${i} track length ${layer.track.length} != frames ${doc.frames}`,
        });
      }
    });
    if (doc.background && doc.background.track.length !== doc.frames) {
      ctx.addIssue({
        code: z.ZodIssueCode.custom,
        message: `background track length ${doc.background.track.length} != frames ${doc.frames}`,
      });
    }
  });

export class SceneValidationError extends Error {}

/** Parse and validate a scene document from JSON text. */
export function parseScene(text: string): SceneDoc {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (exc) {
    throw new SceneValidationError(`invalid JSON: ${String(exc)}`);
  }
  const result = sceneSchema.safeParse(raw);
  if (!result.success) {
    throw new SceneValidationError(result.error.issues
      .map((i) => i.message).join("; "));
  }
  return result.data as SceneDoc;
}

function serializeTransform(t: TransformDoc): string {
  return `{"tx": ${JSON.stringify(t.tx)}, "ty": ${JSON.stringify(t.ty)}, ` +
    `"rot": ${JSON.stringify(t.rot)}, "scale": ${JSON.stringify(t.scale)}}`;
}

function serializeLayer(layer: LayerDoc): string {
  const poly = layer.polygon
    .map(([x, y]) => `[${JSON.stringify(x)}, ${JSON.stringify(y)}]`)
    .join(", ");
  const track = layer.track.map(serializeTransform).join(", ");
  return `{"polygon": [${poly}], "track": [${track}]}`;
}

/** Canonical serialization with fixed key order and spacing. */
export function serializeScene(doc: SceneDoc): string {
  const parts = [
    `"canvas": {"h": ${doc.canvas.h}, "w": ${doc.canvas.w}}`,
    `"frames": ${doc.frames}`,
    `"layers": [${doc.layers.map(serializeLayer).join(", ")}]`,
  ];
  if (doc.background !== undefined) {
    const track = doc.background.track.map(serializeTransform).join(", ");
    parts.push(`"background": {"track": [${track}]}`);
  }
  return `{${parts.join(", ")}}`;
}
