/**
 * Exam countdown driven by the synchronized server clock.
 *
 * Remaining time is always deadline minus estimated-server-now; the expiry
 * callback fires exactly once, even if ticks keep arriving or the timer is
 * restarted around the zero boundary.
 */

export interface CountdownOptions {
  /** Server deadline in ms since epoch. */
  deadlineMs: number;
  /** Estimated server now (e.g. ServerClock.now). */
  serverNow: () => number;
  onTick?: (remainingMs: number) => void;
  onExpire: () => void;
  tickIntervalMs?: number;
}

export class ExamCountdown {
  private timer: ReturnType<typeof setInterval> | null = null;
  private expired = false;

  constructor(private opts: CountdownOptions) {}

  remainingMs(): number {
    return Math.max(0, this.opts.deadlineMs - this.opts.serverNow());
  }

  get hasExpired(): boolean {
    return this.expired;
  }

  start(): void {
    if (this.timer !== null || this.expired) {
      return;
    }
    const interval = this.opts.tickIntervalMs ?? 250;
    this.timer = setInterval(() => this.tick(), interval);
    this.tick();
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private tick(): void {
    const remaining = this.remainingMs();
    this.opts.onTick?.(remaining);
    if (remaining <= 0 && !this.expired) {
      this.expired = true;
      this.stop();
      this.opts.onExpire();
    }
  }
}

/** "M:SS" rendering for the on-screen clock. */
export function formatRemaining(remainingMs: number): string {
  const totalSeconds = Math.max(0, Math.floor(remainingMs / 1000));
  const minutes = Math.floor(totalSeconds / 60);
  const seconds = totalSeconds % 60;
  return `${minutes}:${seconds.toString().padStart(2, "0")}`;
}
