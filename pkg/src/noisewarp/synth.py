"""Synthetic dense flow fields from layered polygon scenes and camera moves.

A scene is a stack of polygons, each with a per-frame transform track
(translate/rotate/scale about the polygon's frame-0 centroid). For every
consecutive frame pair we emit a dense flow: pixels owned by the topmost
covering layer move with that layer, uncovered pixels move with the optional
background track (zero otherwise). Flows are emitted fractional; quantization
happens at the warp boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import Polygon as _ShapelyPolygon

from .errors import InvalidArgumentError
from .fields import FlowField


@dataclass(frozen=True)
class Transform:
    """Scale, then rotate, then translate, all about a fixed pivot."""

    tx: float = 0.0
    ty: float = 0.0
    rot: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        vals = (self.tx, self.ty, self.rot, self.scale)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidArgumentError("transform components must be finite")
        if self.scale <= 0:
            raise InvalidArgumentError("scale must be > 0")

    def apply(self, pts: np.ndarray, pivot: np.ndarray) -> np.ndarray:
        c, s = np.cos(self.rot), np.sin(self.rot)
        rel = (pts - pivot) * self.scale
        rot = np.stack([rel[..., 0] * c - rel[..., 1] * s,
                        rel[..., 0] * s + rel[..., 1] * c], axis=-1)
        return rot + pivot + np.array([self.tx, self.ty])

    def invert(self, pts: np.ndarray, pivot: np.ndarray) -> np.ndarray:
        c, s = np.cos(self.rot), np.sin(self.rot)
        rel = pts - pivot - np.array([self.tx, self.ty])
        unrot = np.stack([rel[..., 0] * c + rel[..., 1] * s,
                          -rel[..., 0] * s + rel[..., 1] * c], axis=-1)
        return unrot / self.scale + pivot


@dataclass(frozen=True)
class Layer:
    """A polygon (frame-0 pixel coordinates) with a per-frame transform track."""

    polygon: np.ndarray
    track: tuple

    def __post_init__(self):
        poly = np.asarray(self.polygon, dtype=np.float64)
        if poly.ndim != 2 or poly.shape[1] != 2 or poly.shape[0] < 3:
            raise InvalidArgumentError("polygon needs >= 3 (x, y) vertices")
        if not np.all(np.isfinite(poly)):
            raise InvalidArgumentError("polygon vertices must be finite")
        if not _ShapelyPolygon(poly).is_valid:
            raise InvalidArgumentError("polygon is self-intersecting or degenerate")
        poly.flags.writeable = False
        object.__setattr__(self, "polygon", poly)
        object.__setattr__(self, "track", tuple(self.track))

    @property
    def centroid(self) -> np.ndarray:
        return self.polygon.mean(axis=0)


@dataclass(frozen=True)
class SceneSpec:
    """Canvas dims, frame count, ordered layers (later occludes earlier),
    and an optional background transform track."""

    height: int
    width: int
    frame_count: int
    layers: tuple = ()
    background: tuple | None = None

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise InvalidArgumentError("canvas dimensions must be >= 1")
        if self.frame_count < 2:
            raise InvalidArgumentError("frame_count must be >= 2")
        object.__setattr__(self, "layers", tuple(self.layers))
        for layer in self.layers:
            if len(layer.track) != self.frame_count:
                raise InvalidArgumentError(
                    "layer track length must equal frame_count")
        if self.background is not None:
            bg = tuple(self.background)
            if len(bg) != self.frame_count:
                raise InvalidArgumentError(
                    "background track length must equal frame_count")
            object.__setattr__(self, "background", bg)


def _points_in_polygon(px: np.ndarray, py: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Even-odd rule ray casting, vectorized over the point arrays."""
    inside = np.zeros(px.shape, dtype=bool)
    nv = verts.shape[0]
    j = nv - 1
    for i in range(nv):
        xi, yi = verts[i]
        xj, yj = verts[j]
        crosses = (yi > py) != (yj > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = (xj - xi) * (py - yi) / (yj - yi) + xi
        inside ^= crosses & (px < xint)
        j = i
    return inside


def render_scene_flows(scene: SceneSpec) -> list[FlowField]:
    """Dense flows for each consecutive frame pair of the scene."""
    h, w = scene.height, scene.width
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)
    pts = np.stack([xs, ys], axis=-1)
    canvas_center = np.array([(w - 1) / 2.0, (h - 1) / 2.0])

    flows = []
    for t in range(scene.frame_count - 1):
        if scene.background is not None:
            bg_t, bg_t1 = scene.background[t], scene.background[t + 1]
            pre = bg_t.invert(pts, canvas_center)
            disp = bg_t1.apply(pre, canvas_center) - pts
            dx, dy = disp[..., 0].copy(), disp[..., 1].copy()
        else:
            dx = np.zeros((h, w))
            dy = np.zeros((h, w))

        # Bottom-to-top: later layers overwrite earlier ones where covered.
        for layer in scene.layers:
            pivot = layer.centroid
            tr_t, tr_t1 = layer.track[t], layer.track[t + 1]
            poly_t = tr_t.apply(layer.polygon, pivot)
            owned = _points_in_polygon(xs, ys, poly_t)
            if not owned.any():
                continue
            pre = tr_t.invert(pts[owned], pivot)
            disp = tr_t1.apply(pre, pivot) - pts[owned]
            dx[owned] = disp[:, 0]
            dy[owned] = disp[:, 1]
        flows.append(FlowField(dx, dy))
    return flows


CAMERA_KINDS = ("pan", "zoom", "rotate")


def camera_flow(kind: str, magnitude, height: int, width: int,
                frame_count: int) -> list[FlowField]:
    """Parametric per-frame camera motion flows.

    pan: magnitude is (dx, dy) pixels per frame (a scalar means rightward).
    zoom: magnitude is the per-frame scale ratio (> 0); ratio 1 is identity.
    rotate: magnitude is radians per frame about the canvas center.
    """
    if kind not in CAMERA_KINDS:
        raise InvalidArgumentError(f"unknown camera kind {kind!r}")
    if frame_count < 2:
        raise InvalidArgumentError("frame_count must be >= 2")

    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    cx, cy = (width - 1) / 2.0, (height - 1) / 2.0

    if kind == "pan":
        if np.isscalar(magnitude):
            mdx, mdy = float(magnitude), 0.0
        else:
            mdx, mdy = (float(m) for m in magnitude)
        if not (np.isfinite(mdx) and np.isfinite(mdy)):
            raise InvalidArgumentError("pan magnitude must be finite")
        dx = np.full((height, width), mdx)
        dy = np.full((height, width), mdy)
    elif kind == "zoom":
        ratio = float(magnitude)
        if not np.isfinite(ratio) or ratio <= 0:
            raise InvalidArgumentError("zoom ratio must be finite and > 0")
        dx = (ratio - 1.0) * (xs - cx)
        dy = (ratio - 1.0) * (ys - cy)
    else:
        theta = float(magnitude)
        if not np.isfinite(theta):
            raise InvalidArgumentError("rotation magnitude must be finite")
        c, s = np.cos(theta), np.sin(theta)
        rx, ry = xs - cx, ys - cy
        dx = rx * c - ry * s - rx
        dy = rx * s + ry * c - ry

    step = FlowField(dx, dy)
    return [step] * (frame_count - 1)


# --- JSON document format -------------------------------------------------
# {"canvas": {"h": .., "w": ..}, "frames": .., "layers": [{"polygon":
# [[x, y], ...], "track": [{"tx": .., "ty": .., "rot": .., "scale": ..},
# ...]}, ...], "background": {"track": [...]}}

def _transform_from_json(obj) -> Transform:
    return Transform(tx=float(obj.get("tx", 0.0)), ty=float(obj.get("ty", 0.0)),
                     rot=float(obj.get("rot", 0.0)),
                     scale=float(obj.get("scale", 1.0)))


def _transform_to_json(tr: Transform) -> dict:
    return {"tx": tr.tx, "ty": tr.ty, "rot": tr.rot, "scale": tr.scale}


def scene_from_json(doc) -> SceneSpec:
    """Parse a SceneSpec from a JSON string or already-decoded document."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"invalid scene JSON: {exc}") from exc
    try:
        canvas = doc["canvas"]
        h, w = int(canvas["h"]), int(canvas["w"])
        frames = int(doc["frames"])
        layers = [
            Layer(polygon=np.asarray(ld["polygon"], dtype=np.float64),
                  track=[_transform_from_json(t) for t in ld["track"]])
            for ld in doc.get("layers", [])
        ]
        background = None
        if doc.get("background") is not None:
            background = [_transform_from_json(t)
                          for t in doc["background"]["track"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"malformed scene document: {exc}") from exc
    return SceneSpec(height=h, width=w, frame_count=frames,
                     layers=layers, background=background)


def scene_to_json(scene: SceneSpec) -> dict:
    doc = {
        "canvas": {"h": scene.height, "w": scene.width},
        "frames": scene.frame_count,
        "layers": [
            {"polygon": [[float(x), float(y)] for x, y in layer.polygon],
             "track": [_transform_to_json(t) for t in layer.track]}
            for layer in scene.layers
        ],
    }
    if scene.background is not None:
        doc["background"] = {"track": [_transform_to_json(t)
                                       for t in scene.background]}
    return doc
