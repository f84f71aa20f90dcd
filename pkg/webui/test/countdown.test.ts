import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ExamCountdown, formatRemaining } from "../src/countdown.js";

describe("ExamCountdown", () => {
  beforeEach(() => {
    vi.useFakeTimers();
    vi.setSystemTime(1_000_000);
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it("fires onExpire exactly once even with ticks past zero", () => {
    const onExpire = vi.fn();
    const countdown = new ExamCountdown({
      deadlineMs: Date.now() + 10_000,
      serverNow: () => Date.now(),
      onExpire,
    });
    countdown.start();
    vi.advanceTimersByTime(60_000);
    expect(onExpire).toHaveBeenCalledTimes(1);
    expect(countdown.hasExpired).toBe(true);
  });

  it("does not refire after a restart attempt", () => {
    const onExpire = vi.fn();
    const countdown = new ExamCountdown({
      deadlineMs: Date.now() + 1_000,
      serverNow: () => Date.now(),
      onExpire,
    });
    countdown.start();
    vi.advanceTimersByTime(5_000);
    countdown.start();
    vi.advanceTimersByTime(5_000);
    expect(onExpire).toHaveBeenCalledTimes(1);
  });

  it("reports remaining time from the injected server clock", () => {
    const countdown = new ExamCountdown({
      deadlineMs: Date.now() + 90_000,
      serverNow: () => Date.now(),
      onExpire: () => {},
    });
    expect(countdown.remainingMs()).toBe(90_000);
    vi.advanceTimersByTime(30_000);
    expect(countdown.remainingMs()).toBe(60_000);
  });

  it("clamps remaining at zero", () => {
    const countdown = new ExamCountdown({
      deadlineMs: Date.now() - 1,
      serverNow: () => Date.now(),
      onExpire: () => {},
    });
    expect(countdown.remainingMs()).toBe(0);
  });

  it("ticks with the remaining time", () => {
    const samples: number[] = [];
    const countdown = new ExamCountdown({
      deadlineMs: Date.now() + 2_000,
      serverNow: () => Date.now(),
      onTick: (r) => samples.push(r),
      onExpire: () => {},
      tickIntervalMs: 500,
    });
    countdown.start();
    vi.advanceTimersByTime(1_500);
    expect(samples[0]).toBe(2_000);
    expect(samples).toContain(500);
  });
});

describe("formatRemaining", () => {
  it.each([
    [0, "0:00"],
    [999, "0:00"],
    [61_000, "1:01"],
    [3_600_000, "60:00"],
    [72_000, "1:12"],
  ])("renders %d ms as %s", (ms, expected) => {
    expect(formatRemaining(ms)).toBe(expected);
  });
});
