/**
 * Debounced live preview against the warping service.
 *
 * Every editor change calls `update` with the current scene text; after a
 * quiet period the scene is posted and preview URLs are delivered to the
 * callback. A request sequence number makes stale responses (superseded by
 * newer edits) silently dropped, and transport failures surface through a
 * non-blocking error callback so editing continues.
 */

export interface ScenePostResult {
  id: string;
  frames: number;
  flow_count: number;
}

export interface PreviewTransport {
  postScene(sceneText: string): Promise<ScenePostResult>;
}

export interface PreviewCallbacks {
  /** Fired with the scene id of the newest accepted response. */
  onScene(sceneId: string, flowCount: number): void;
  onError(message: string): void;
}

export const DEFAULT_DEBOUNCE_MS = 250;

export class LivePreview {
  private seq = 0;
  private accepted = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pendingText: string | null = null;

  constructor(
    private transport: PreviewTransport,
    private callbacks: PreviewCallbacks,
    private debounceMs: number = DEFAULT_DEBOUNCE_MS,
  ) {}

  /** Schedule a preview refresh for the given scene text. */
  update(sceneText: string): void {
    this.pendingText = sceneText;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.fire();
    }, this.debounceMs);
  }

  /** Post immediately, bypassing the debounce (used on explicit refresh). */
  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.fire();
  }

  private fire(): void {
    if (this.pendingText === null) return;
    const text = this.pendingText;
    this.pendingText = null;
    const mySeq = ++this.seq;
    this.transport.postScene(text).then(
      (result) => {
        // newest-wins: ignore anything superseded by a later request
        if (mySeq <= this.accepted) return;
        this.accepted = mySeq;
        this.callbacks.onScene(result.id, result.flow_count);
      },
      (err) => {
        if (mySeq <= this.accepted) return;
        this.callbacks.onError(String(err));
      },
    );
  }
}

export function flowPreviewUrl(base: string, sceneId: string, frame: number): string {
  return `${base}/scenes/${sceneId}/flow-preview/${frame}`;
}

export function noisePreviewUrl(base: string, jobId: string, frame: number): string {
  return `${base}/jobs/${jobId}/preview/${frame}`;
}

/** fetch-backed transport for the browser build. */
export function fetchTransport(base: string): PreviewTransport {
  return {
    async postScene(sceneText: string): Promise<ScenePostResult> {
      const resp = await fetch(`${base}/scenes`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: sceneText,
      });
      if (!resp.ok) {
        throw new Error(`scene rejected: HTTP ${resp.status}`);
      }
      return (await resp.json()) as ScenePostResult;
    },
  };
}
