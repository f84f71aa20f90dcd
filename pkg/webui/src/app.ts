/**
 * Application entry: wires the API client, the synchronized clock and the
 * view flow. Candidates move login -> info -> exam -> feedback; the exam
 * resumes in place after a reload, and a terminal session lands straight
 * on feedback. Admins get the management panel.
 */

import { renderAdmin } from "./admin.js";
import { ApiClient, ApiFailure } from "./api.js";
import { ServerClock } from "./clock.js";
import { h, show } from "./dom.js";
import { renderExam, renderFeedback, renderInfo, renderLogin } from "./views.js";

const api = new ApiClient("");
const clock = new ServerClock(() => api.serverTimeMs());

function root(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

async function enterCandidateFlow(): Promise<void> {
  await clock.sync();
  clock.startAutoResync();
  try {
    const info = await api.examInfo();
    renderInfo(root(), info, () => void startExam());
  } catch (e) {
    if (e instanceof ApiFailure && e.code === "INVALID_STATE") {
      await resumeOrFinish();
      return;
    }
    if (e instanceof ApiFailure && e.code === "INSUFFICIENT_BANK") {
      show(
        root(),
        h("p", { class: "error" }, "The test is not ready yet; please tell the invigilator."),
      );
      return;
    }
    throw e;
  }
}

async function resumeOrFinish(): Promise<void> {
  try {
    // already running in another tab or reloaded mid-exam
    const resumed = await api.resumeExam();
    showExam(resumed.deadline * 1000, resumed.questions, resumed.answers, true);
  } catch (e) {
    if (e instanceof ApiFailure && e.code === "INVALID_STATE") {
      await showFeedback();
      return;
    }
    throw e;
  }
}

async function startExam(): Promise<void> {
  const started = await api.startExam();
  showExam(started.deadline * 1000, started.questions, {}, false);
}

function showExam(
  deadlineMs: number,
  questions: Parameters<typeof renderExam>[4],
  priorAnswers: Record<string, number>,
  resumed: boolean,
): void {
  renderExam(root(), api, clock, deadlineMs, questions, priorAnswers, () => {
    void showFeedback();
  });
  if (resumed) {
    root().prepend(
      h(
        "p",
        { class: "notice" },
        "A session was already active for this account; continuing it here.",
      ),
    );
  }
}

async function showFeedback(): Promise<void> {
  const feedback = await api.feedback();
  renderFeedback(root(), feedback);
}

function boot(): void {
  renderLogin(root(), api, (role) => {
    if (role === "admin") {
      renderAdmin(root(), api);
    } else {
      void enterCandidateFlow().catch(() => {
        show(root(), h("p", { class: "error" }, "Something went wrong; please log in again."));
      });
    }
  });
}

document.addEventListener("DOMContentLoaded", boot);
