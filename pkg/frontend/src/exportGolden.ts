/** Regenerates golden/pan_right_scene.json, consumed by the engine's
 * end-to-end authoring test. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { buildPanRightScene } from "./goldenScene.js";

const here = dirname(fileURLToPath(import.meta.url));
const out = join(here, "..", "golden", "pan_right_scene.json");
mkdirSync(dirname(out), { recursive: true });
writeFileSync(out, buildPanRightScene() + "\n");
console.log(`wrote ${out}`);
