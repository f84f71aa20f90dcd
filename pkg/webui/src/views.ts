/**
 * Candidate views: login, exam information, the live question list with
 * its countdown, and the post-submission feedback page.
 */

import {
  ApiClient,
  ApiFailure,
  ExamInfo,
  Feedback,
  FormQuestion,
  ScoreReport,
} from "./api.js";
import { formatRemaining } from "./countdown.js";
import { h, show } from "./dom.js";
import { ExamController } from "./examController.js";
import { ServerClock } from "./clock.js";
import { PushState } from "./answers.js";

export interface CandidateHandlers {
  onLoggedIn: (role: "admin" | "candidate") => void;
  onStartRequested: () => void;
  onSubmitted: () => void;
}

export function renderLogin(
  root: HTMLElement,
  api: ApiClient,
  onLoggedIn: (role: "admin" | "candidate") => void,
): void {
  const error = h("p", { class: "error hidden" });
  const username = h("input", { name: "username", autocomplete: "username" });
  const password = h("input", { name: "password", type: "password" });
  const form = h(
    "form",
    { class: "card login" },
    h("h1", {}, "Skill Evaluation Test"),
    h("p", {}, "Sign in with the username and password you were given before the test."),
    h("label", {}, "Username ", username),
    h("label", {}, "Password ", password),
    error,
    h("button", { type: "submit" }, "Log in"),
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    error.classList.add("hidden");
    try {
      const session = await api.login(username.value.trim(), password.value);
      api.setToken(session.token);
      onLoggedIn(session.role);
    } catch (e) {
      // wrong credentials: show the error and let the candidate retry
      error.textContent =
        e instanceof ApiFailure && e.status === 401
          ? "Wrong username or password. Please try again."
          : "Could not reach the server. Please try again.";
      error.classList.remove("hidden");
      password.value = "";
    }
  });
  show(root, form);
  username.focus();
}

export function renderInfo(
  root: HTMLElement,
  info: ExamInfo,
  onStart: () => void,
): void {
  const button = h("button", { class: "primary" }, "Start the test");
  button.addEventListener("click", () => {
    button.setAttribute("disabled", "disabled");
    onStart();
  });
  show(
    root,
    h(
      "section",
      { class: "card" },
      h("h1", {}, "Test information"),
      h(
        "dl",
        {},
        h("dt", {}, "Subject"),
        h("dd", {}, info.subject_name),
        h("dt", {}, "Number of questions"),
        h("dd", {}, String(info.n_questions)),
        h("dt", {}, "Duration"),
        h("dd", {}, `${Math.floor(info.duration_seconds / 60)} minutes`),
        h("dt", {}, "Suggested pace"),
        h("dd", {}, `about ${info.per_question_budget} seconds per question`),
      ),
      h("p", {}, info.schedule_policy),
      button,
    ),
  );
}

export interface ExamViewElements {
  controller: ExamController;
}

export function renderExam(
  root: HTMLElement,
  api: ApiClient,
  clock: ServerClock,
  deadlineMs: number,
  questions: FormQuestion[],
  priorAnswers: Record<string, number>,
  onFinished: (report: ScoreReport) => void,
): ExamViewElements {
  const clockEl = h("span", { class: "clock" }, "--:--");
  const saveEl = h("span", { class: "save-state" }, "");
  const submitButton = h("button", { class: "primary" }, "Submit answers");
  const banner = h(
    "header",
    { class: "exam-header" },
    h("span", {}, "Time remaining: "),
    clockEl,
    saveEl,
    submitButton,
  );

  const list = h("ol", { class: "questions" });
  const inputs: HTMLInputElement[] = [];

  const controller = new ExamController(api, clock, deadlineMs, {
    onTick: (remaining) => {
      clockEl.textContent = formatRemaining(remaining);
      clockEl.classList.toggle("urgent", remaining < 5 * 60_000);
    },
    onPushState: (state: PushState, pending: number) => {
      saveEl.textContent =
        state === "retrying"
          ? `connection trouble, retrying (${pending} unsaved)`
          : state === "saving"
            ? "saving..."
            : "all answers saved";
      saveEl.classList.toggle("error", state === "retrying");
    },
    onFinished: (report) => {
      inputs.forEach((i) => i.setAttribute("disabled", "disabled"));
      submitButton.setAttribute("disabled", "disabled");
      onFinished(report);
    },
    onError: () => {
      saveEl.textContent = "submission failed, please tell the invigilator";
      saveEl.classList.add("error");
    },
  });

  for (const q of questions) {
    const choices = h("div", { class: "choices" });
    q.choices.forEach((choice, index) => {
      const input = h("input", {
        type: "radio",
        name: `q-${q.id}`,
        value: String(index),
      });
      if (priorAnswers[q.id] === index) {
        input.checked = true;
      }
      input.addEventListener("change", () => controller.selectAnswer(q.id, index));
      inputs.push(input);
      choices.append(h("label", { class: "choice" }, input, " ", choice));
    });
    list.append(h("li", { class: "question" }, h("p", {}, q.text), choices));
  }

  submitButton.addEventListener("click", () => void controller.submit("manual"));

  show(root, banner, list);
  controller.start();
  return { controller };
}

export function renderFeedback(root: HTMLElement, feedback: Feedback): void {
  const report = feedback.report;
  const summary = h(
    "section",
    { class: "card" },
    h("h1", {}, `Final score: ${report.final_score} / 100`),
    h(
      "p",
      {},
      feedback.state === "expired"
        ? "Time ran out; answers given before the deadline were scored."
        : `Finished in ${Math.floor(report.elapsed_seconds / 60)} min ${report.elapsed_seconds % 60} s.`,
    ),
    h(
      "table",
      { class: "scores" },
      h(
        "tr",
        {},
        ...Object.keys(report.per_category_score).map((c) => h("th", {}, c)),
      ),
      h(
        "tr",
        {},
        ...Object.values(report.per_category_score).map((v) => h("td", {}, String(v))),
      ),
    ),
  );

  const list = h("ol", { class: "questions" });
  for (const item of feedback.items) {
    const choices = h("div", { class: "choices" });
    item.choices.forEach((choice, index) => {
      const marks: string[] = [];
      if (index === item.correct_index) {
        marks.push("right answer");
      }
      if (item.chosen_index === index && index !== item.correct_index) {
        marks.push("your choice");
      }
      choices.append(
        h(
          "p",
          {
            class:
              index === item.correct_index
                ? "choice right"
                : item.chosen_index === index
                  ? "choice wrong"
                  : "choice",
          },
          choice,
          marks.length ? ` (${marks.join(", ")})` : "",
        ),
      );
    });
    list.append(
      h(
        "li",
        { class: `question verdict-${item.verdict}` },
        h("p", {}, `${item.text} [${item.verdict}]`),
        choices,
      ),
    );
  }
  show(root, summary, h("h2", {}, "Your answers"), list);
}
