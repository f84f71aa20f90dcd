/**
 * Orchestrates one live exam sitting: the synced countdown, the immediate
 * answer pushes, and a submission that can be triggered by the button or
 * by the countdown hitting zero, but never runs twice.
 */

import { ApiClient, ApiFailure, ScoreReport } from "./api.js";
import { AnswerPusher, PushState } from "./answers.js";
import { ExamCountdown } from "./countdown.js";
import { ServerClock } from "./clock.js";

export interface ExamCallbacks {
  onTick: (remainingMs: number) => void;
  onPushState: (state: PushState, pending: number) => void;
  onFinished: (report: ScoreReport, trigger: "manual" | "auto") => void;
  onError: (error: unknown) => void;
}

export class ExamController {
  readonly pusher: AnswerPusher;
  readonly countdown: ExamCountdown;
  private submitPromise: Promise<void> | null = null;
  submitCount = 0;

  constructor(
    private api: ApiClient,
    clock: ServerClock,
    deadlineMs: number,
    private cb: ExamCallbacks,
  ) {
    this.pusher = new AnswerPusher((qid, idx) => api.answer(qid, idx), {
      onStateChange: (state, pending) => cb.onPushState(state, pending),
    });
    this.countdown = new ExamCountdown({
      deadlineMs,
      serverNow: () => clock.now(),
      onTick: (remaining) => cb.onTick(remaining),
      onExpire: () => void this.submit("auto"),
    });
  }

  start(): void {
    this.countdown.start();
  }

  selectAnswer(questionId: string, chosenIndex: number): void {
    this.pusher.select(questionId, chosenIndex);
  }

  /** Submit exactly once, whatever the trigger. */
  submit(trigger: "manual" | "auto"): Promise<void> {
    if (this.submitPromise === null) {
      this.submitPromise = this.doSubmit(trigger);
    }
    return this.submitPromise;
  }

  private async doSubmit(trigger: "manual" | "auto"): Promise<void> {
    this.countdown.stop();
    if (trigger === "manual") {
      // a last flush so nothing the candidate picked is left unsent
      await this.pusher.flush().catch(() => {});
    }
    this.pusher.stop();
    this.submitCount += 1;
    try {
      const report = await this.api.submit();
      this.cb.onFinished(report, trigger);
    } catch (error) {
      if (error instanceof ApiFailure && error.code === "INVALID_STATE") {
        // someone finalized first (e.g. server-side expiry); the report
        // is still there for us
        try {
          const feedback = await this.api.feedback();
          this.cb.onFinished(feedback.report, trigger);
          return;
        } catch (inner) {
          this.cb.onError(inner);
          return;
        }
      }
      this.cb.onError(error);
    }
  }
}
