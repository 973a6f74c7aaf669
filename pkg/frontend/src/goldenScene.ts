/** Reference pan-right scene built through the editor API: 128x128,
 * 31 frames, background translating right at 1.3 px/frame. */

import { Editor, exportText, initialState } from "./editor.js";

export const GOLDEN_FRAMES = 31;

export function buildPanRightScene(): string {
  const editor = new Editor(initialState(128, 128, GOLDEN_FRAMES));
  let res = editor.setBackgroundKeyframe(0, { tx: 0 });
  if (!res.ok) throw new Error(res.message);
  res = editor.setBackgroundKeyframe(GOLDEN_FRAMES - 1,
    { tx: 1.3 * (GOLDEN_FRAMES - 1) });
  if (!res.ok) throw new Error(res.message);
  return exportText(editor.state);
}
