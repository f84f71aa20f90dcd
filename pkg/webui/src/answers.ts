/**
 * Immediate answer push with retry.
 *
 * Every selection is sent to the server the moment it changes, so an
 * expiry or crash loses nothing entered before the deadline. Failed sends
 * stay queued and are retried; a newer selection for the same question
 * always supersedes an older one (last write wins).
 */

export type SendFn = (questionId: string, chosenIndex: number) => Promise<void>;
export type PushState = "idle" | "saving" | "retrying";

export interface PusherOptions {
  retryDelayMs?: number;
  onStateChange?: (state: PushState, pendingCount: number) => void;
}

export class AnswerPusher {
  private pending = new Map<string, number>();
  private inflight = false;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;

  constructor(private send: SendFn, private opts: PusherOptions = {}) {}

  /** Record a selection and push it immediately. */
  select(questionId: string, chosenIndex: number): void {
    if (this.stopped) {
      return;
    }
    this.pending.set(questionId, chosenIndex);
    void this.flush();
  }

  get pendingCount(): number {
    return this.pending.size;
  }

  /** Stop pushing (used once the exam is over). */
  stop(): void {
    this.stopped = true;
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
  }

  async flush(): Promise<void> {
    if (this.inflight || this.stopped) {
      return;
    }
    this.inflight = true;
    try {
      while (this.pending.size > 0 && !this.stopped) {
        const [questionId, chosenIndex] = this.pending.entries().next().value as [
          string,
          number,
        ];
        this.notify("saving");
        try {
          await this.send(questionId, chosenIndex);
        } catch {
          this.scheduleRetry();
          return;
        }
        // only clear if the user did not pick something newer meanwhile
        if (this.pending.get(questionId) === chosenIndex) {
          this.pending.delete(questionId);
        }
      }
      this.notify("idle");
    } finally {
      this.inflight = false;
    }
  }

  private scheduleRetry(): void {
    this.notify("retrying");
    if (this.retryTimer !== null || this.stopped) {
      return;
    }
    this.retryTimer = setTimeout(() => {
      this.retryTimer = null;
      void this.flush();
    }, this.opts.retryDelayMs ?? 2000);
  }

  private notify(state: PushState): void {
    this.opts.onStateChange?.(state, this.pending.size);
  }
}
