/**
 * Server clock synchronization.
 *
 * The countdown must never trust the local clock: we estimate the offset
 * between server time and local time from the time endpoint and re-measure
 * periodically, so a machine that is minutes wrong still displays the
 * server's truth to within network jitter.
 */

export interface TimeSample {
  /** Server wall clock in milliseconds since epoch. */
  serverTimeMs: number;
}

export type TimeFetcher = () => Promise<TimeSample>;

const RESYNC_INTERVAL_MS = 30_000;

export class ServerClock {
  private offsetMs = 0;
  private synced = false;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private fetchTime: TimeFetcher,
    private localNow: () => number = () => Date.now(),
  ) {}

  /** offset = serverNow - localNow, latency-compensated by half the RTT. */
  async sync(): Promise<number> {
    const before = this.localNow();
    const { serverTimeMs } = await this.fetchTime();
    const after = this.localNow();
    const latency = (after - before) / 2;
    this.offsetMs = serverTimeMs + latency - after;
    this.synced = true;
    return this.offsetMs;
  }

  /** Best estimate of the server's current time, in ms. */
  now(): number {
    return this.localNow() + this.offsetMs;
  }

  get isSynced(): boolean {
    return this.synced;
  }

  get offset(): number {
    return this.offsetMs;
  }

  startAutoResync(intervalMs: number = RESYNC_INTERVAL_MS): void {
    this.stopAutoResync();
    this.timer = setInterval(() => {
      void this.sync().catch(() => {
        // keep the previous offset; the next tick retries
      });
    }, intervalMs);
  }

  stopAutoResync(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
