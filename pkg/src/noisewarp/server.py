"""Local HTTP service backing the authoring UI.

JSON-over-HTTP: scenes are posted as SceneSpec documents, warp jobs run
asynchronously in worker threads and are polled via /jobs/{id}. All state is
in-memory; an optional persistence directory mirrors finished containers to
disk. Completed job responses are immutable.
"""

from __future__ import annotations

import base64
import pathlib
import threading
import uuid

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import fio
from .errors import FormatError, InvalidArgumentError, NoiseWarpError
from .pipeline import run_warp_pipeline
from .synth import render_scene_flows, scene_from_json, scene_to_json


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"code": code, "message": message}})


class _Job:
    def __init__(self, job_id: str):
        self.id = job_id
        self.status = "queued"
        self.message = ""
        self.container: bytes | None = None
        self.frame_count = 0


def create_app(persist_dir: pathlib.Path | None = None) -> FastAPI:
    app = FastAPI(title="noisewarp service")
    scenes: dict[str, dict] = {}
    scene_flows: dict[str, list] = {}
    jobs: dict[str, _Job] = {}
    lock = threading.Lock()
    if persist_dir is not None:
        persist_dir = pathlib.Path(persist_dir)
        persist_dir.mkdir(parents=True, exist_ok=True)

    @app.post("/scenes", status_code=201)
    async def post_scene(request: Request):
        body = await request.body()
        try:
            scene = scene_from_json(body.decode("utf-8", errors="replace"))
            flows = render_scene_flows(scene)
        except (InvalidArgumentError, UnicodeDecodeError) as exc:
            return _error(400, "invalid_scene", str(exc))
        scene_id = uuid.uuid4().hex
        with lock:
            scenes[scene_id] = scene_to_json(scene)
            scene_flows[scene_id] = flows
        return {"id": scene_id, "frames": scene.frame_count,
                "flow_count": len(flows)}

    @app.get("/scenes/{scene_id}")
    def get_scene(scene_id: str):
        if scene_id not in scenes:
            return _error(404, "unknown_scene", scene_id)
        return scenes[scene_id]

    def _flow_at(scene_id: str, t: int):
        if scene_id not in scene_flows:
            return None, _error(404, "unknown_scene", scene_id)
        flows = scene_flows[scene_id]
        if not 0 <= t < len(flows):
            return None, _error(404, "unknown_frame",
                                f"frame {t} not in [0, {len(flows)})")
        return flows[t], None

    @app.get("/scenes/{scene_id}/flows/{t}")
    def get_flow(scene_id: str, t: int):
        flow, err = _flow_at(scene_id, t)
        if err is not None:
            return err
        return Response(content=fio.write_flo(flow),
                        media_type="application/octet-stream")

    @app.get("/scenes/{scene_id}/flow-preview/{t}")
    def get_flow_preview(scene_id: str, t: int):
        flow, err = _flow_at(scene_id, t)
        if err is not None:
            return err
        png = fio.image_to_png_bytes(fio.visualize_flow(flow))
        return Response(content=png, media_type="image/png")

    def _run_job(job: _Job, flows, params: dict):
        try:
            seq, _ = run_warp_pipeline(
                flows, seed=params["seed"], channels=params["channels"],
                gamma=params["gamma"], spatial_down=params["spatial_down"],
                temporal_down=params["temporal_down"])
            data = fio.write_noise_container(seq)
            with lock:
                job.container = data
                job.frame_count = len(seq)
                job.status = "done"
            if persist_dir is not None:
                (persist_dir / f"{job.id}.gwtf").write_bytes(data)
        except NoiseWarpError as exc:
            with lock:
                job.status = "error"
                job.message = str(exc)

    @app.post("/warp", status_code=202)
    async def post_warp(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "invalid_json", "request body is not JSON")
        if not isinstance(body, dict):
            return _error(400, "invalid_json", "expected a JSON object")
        params = {
            "seed": int(body.get("seed", 0)),
            "channels": int(body.get("channels", 1)),
            "gamma": float(body.get("gamma", 0.0)),
            "spatial_down": int(body.get("spatial_down", 1)),
            "temporal_down": int(body.get("temporal_down", 1)),
        }
        if not 0.0 <= params["gamma"] <= 1.0:
            return _error(400, "invalid_gamma", "gamma must lie in [0, 1]")

        if "scene_id" in body:
            scene_id = body["scene_id"]
            if scene_id not in scene_flows:
                return _error(404, "unknown_scene", str(scene_id))
            flows = scene_flows[scene_id]
        elif "flows_b64" in body:
            try:
                flows = [fio.read_flo(base64.b64decode(blob))
                         for blob in body["flows_b64"]]
            except FormatError as exc:
                return _error(400, "invalid_flow", str(exc))
            if not flows:
                return _error(400, "invalid_flow", "empty flow list")
            if any(f.shape != flows[0].shape for f in flows):
                return _error(422, "dimension_mismatch",
                              "uploaded flows have differing dimensions")
        else:
            return _error(400, "missing_input",
                          "provide scene_id or flows_b64")

        job = _Job(uuid.uuid4().hex)
        with lock:
            jobs[job.id] = job
            job.status = "running"
        thread = threading.Thread(target=_run_job, args=(job, flows, params),
                                  daemon=True)
        thread.start()
        return {"job_id": job.id}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return _error(404, "unknown_job", job_id)
        with lock:
            payload = {"id": job.id, "status": job.status}
            if job.status == "error":
                payload["message"] = job.message
            if job.status == "done":
                payload["container_url"] = f"/jobs/{job.id}/container"
                payload["previews"] = [f"/jobs/{job.id}/preview/{t}"
                                       for t in range(job.frame_count)]
        return payload

    @app.get("/jobs/{job_id}/container")
    def get_container(job_id: str):
        job = jobs.get(job_id)
        if job is None or job.container is None:
            return _error(404, "unknown_job", job_id)
        return Response(content=job.container,
                        media_type="application/octet-stream",
                        headers={"Cache-Control": "immutable"})

    @app.get("/jobs/{job_id}/preview/{t}")
    def get_noise_preview(job_id: str, t: int):
        job = jobs.get(job_id)
        if job is None or job.container is None:
            return _error(404, "unknown_job", job_id)
        seq = fio.read_noise_container(job.container)
        if not 0 <= t < len(seq):
            return _error(404, "unknown_frame",
                          f"frame {t} not in [0, {len(seq)})")
        png = fio.image_to_png_bytes(fio.visualize_noise(seq.frames[t]))
        return Response(content=png, media_type="image/png",
                        headers={"Cache-Control": "immutable"})

    return app
