/** Browser entry point: canvas polygon editing, keyframe panel, and live
 * flow/noise previews from the local warping service. */

import { Editor, exportText, importText, initialState } from "./editor.js";
import { Point } from "./sceneModel.js";
import {
  LivePreview,
  fetchTransport,
  flowPreviewUrl,
} from "./preview.js";

const SERVICE = (window as unknown as { NOISEWARP_URL?: string })
  .NOISEWARP_URL ?? "http://127.0.0.1:8787";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("editor-canvas");
const ctx = canvas.getContext("2d")!;
const banner = el<HTMLDivElement>("banner");
const layerList = el<HTMLUListElement>("layer-list");
const flowImg = el<HTMLImageElement>("flow-preview");
const frameSlider = el<HTMLInputElement>("frame-slider");

const editor = new Editor(initialState(canvas.height, canvas.width, 30));
let currentSceneId: string | null = null;
let dragging: { layer: number; index: number } | null = null;

const preview = new LivePreview(fetchTransport(SERVICE), {
  onScene(sceneId, flowCount) {
    currentSceneId = sceneId;
    banner.textContent = "";
    frameSlider.max = String(Math.max(flowCount - 1, 0));
    refreshPreviewImage();
  },
  onError(message) {
    // non-blocking: editing continues while the service is unreachable
    banner.textContent = `preview unavailable: ${message}`;
  },
});

function refreshPreviewImage(): void {
  if (currentSceneId === null) return;
  const frame = Number(frameSlider.value);
  flowImg.src = flowPreviewUrl(SERVICE, currentSceneId, frame);
}

function pushPreview(): void {
  preview.update(exportText(editor.state));
}

function draw(): void {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.lineWidth = 1.5;
  editor.state.layers.forEach((layer, i) => {
    ctx.strokeStyle = i === editor.state.selectedLayer ? "#d22" : "#36c";
    ctx.beginPath();
    layer.polygon.forEach(([x, y], j) =>
      j === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y),
    );
    ctx.closePath();
    ctx.stroke();
    for (const [x, y] of layer.polygon) {
      ctx.fillStyle = "#36c";
      ctx.fillRect(x - 2, y - 2, 4, 4);
    }
  });
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  editor.state.draft.forEach(([x, y], j) =>
    j === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y),
  );
  ctx.stroke();
  for (const [x, y] of editor.state.draft) {
    ctx.fillStyle = "#888";
    ctx.fillRect(x - 2, y - 2, 4, 4);
  }
  layerList.innerHTML = "";
  editor.state.layers.forEach((layer, i) => {
    const item = document.createElement("li");
    item.textContent = `layer ${i} (${layer.polygon.length} vertices, ` +
      `${layer.keys.length} keys)`;
    layerList.appendChild(item);
  });
}

function hitVertex(p: Point): { layer: number; index: number } | null {
  for (let i = 0; i < editor.state.layers.length; i++) {
    const poly = editor.state.layers[i]!.polygon;
    for (let j = 0; j < poly.length; j++) {
      const [x, y] = poly[j]!;
      if (Math.hypot(x - p[0], y - p[1]) < 5) return { layer: i, index: j };
    }
  }
  return null;
}

function canvasPoint(ev: MouseEvent): Point {
  const rect = canvas.getBoundingClientRect();
  return [ev.clientX - rect.left, ev.clientY - rect.top];
}

canvas.addEventListener("mousedown", (ev) => {
  const p = canvasPoint(ev);
  const hit = hitVertex(p);
  if (hit !== null) {
    dragging = hit;
    return;
  }
  editor.addVertex(p);
  draw();
});

canvas.addEventListener("mousemove", (ev) => {
  if (dragging === null) return;
  const res = editor.dragLayerVertex(dragging.layer, dragging.index,
    canvasPoint(ev));
  if (!res.ok && res.message !== undefined) banner.textContent = res.message;
  draw();
});

canvas.addEventListener("mouseup", () => {
  if (dragging !== null) {
    dragging = null;
    pushPreview();
  }
});

el<HTMLButtonElement>("close-polygon").addEventListener("click", () => {
  const res = editor.closePolygon();
  banner.textContent = res.ok ? "" : res.message ?? "";
  draw();
  if (res.ok) pushPreview();
});

el<HTMLButtonElement>("undo").addEventListener("click", () => {
  editor.undo();
  draw();
  pushPreview();
});

el<HTMLButtonElement>("redo").addEventListener("click", () => {
  editor.redo();
  draw();
  pushPreview();
});

el<HTMLButtonElement>("set-key").addEventListener("click", () => {
  const layer = editor.state.selectedLayer;
  const frame = Number(frameSlider.value);
  const tx = Number(el<HTMLInputElement>("key-tx").value);
  const ty = Number(el<HTMLInputElement>("key-ty").value);
  const rot = Number(el<HTMLInputElement>("key-rot").value);
  const scale = Number(el<HTMLInputElement>("key-scale").value);
  const res = layer === null
    ? editor.setBackgroundKeyframe(frame, { tx, ty, rot, scale })
    : editor.setKeyframe(layer, frame, { tx, ty, rot, scale });
  banner.textContent = res.ok ? "" : res.message ?? "";
  if (res.ok) pushPreview();
});

el<HTMLButtonElement>("export-scene").addEventListener("click", () => {
  const blob = new Blob([exportText(editor.state)],
    { type: "application/json" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "scene.json";
  link.click();
});

el<HTMLInputElement>("import-scene").addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  const file = input.files?.[0];
  if (file === undefined) return;
  try {
    editor.state = importText(await file.text());
    banner.textContent = "";
  } catch (exc) {
    banner.textContent = `import failed: ${String(exc)}`;
  }
  draw();
  pushPreview();
});

frameSlider.addEventListener("input", refreshPreviewImage);

draw();
pushPreview();
