/**
 * Administrator panel: account provisioning, question entry with inline
 * validation, and the results/skills dashboards.
 */

import { ApiClient, ApiFailure, StoredResult } from "./api.js";
import { h, clear, show } from "./dom.js";
import { skillLabels } from "./skills.js";
import { questionDefects } from "./validate.js";

const CATEGORIES = ["Programming", "Networking", "Database", "Security", "IT"];

export function renderAdmin(root: HTMLElement, api: ApiClient): void {
  const panel = h("div", { class: "panel" });
  const tabs = h(
    "nav",
    { class: "tabs" },
    tabButton("Users", () => renderUsers(panel, api)),
    tabButton("Questions", () => renderQuestionForm(panel, api)),
    tabButton("Results", () => void renderResults(panel, api)),
  );
  show(root, h("h1", {}, "Administration"), tabs, panel);
  renderUsers(panel, api);
}

function tabButton(label: string, activate: () => void): HTMLButtonElement {
  const b = h("button", { class: "tab" }, label);
  b.addEventListener("click", activate);
  return b;
}

function renderUsers(panel: HTMLElement, api: ApiClient): void {
  const first = h("input", { placeholder: "First name" });
  const last = h("input", { placeholder: "Last name" });
  const output = h("div", { class: "credentials" });
  const addButton = h("button", { class: "primary" }, "Create candidate");
  addButton.addEventListener("click", async () => {
    try {
      const creds = await api.addUser(first.value.trim(), last.value.trim());
      // shown exactly once; there is no way to fetch the password again
      show(
        output,
        h(
          "p",
          { class: "once" },
          `Hand these to the candidate now - username: ${creds.username}, password: ${creds.password}`,
        ),
      );
      first.value = "";
      last.value = "";
    } catch (e) {
      show(output, h("p", { class: "error" }, failureText(e)));
    }
  });

  const rmName = h("input", { placeholder: "username" });
  const rmOut = h("p", {});
  const rmButton = h("button", {}, "Remove candidate");
  rmButton.addEventListener("click", async () => {
    try {
      const res = await api.removeUser(rmName.value.trim());
      rmOut.textContent = `removed ${res.removed}`;
      rmOut.className = "";
    } catch (e) {
      rmOut.textContent = failureText(e);
      rmOut.className = "error";
    }
  });

  show(
    panel,
    h("section", { class: "card" }, h("h2", {}, "Add candidate"), first, last, addButton, output),
    h("section", { class: "card" }, h("h2", {}, "Remove candidate"), rmName, rmButton, rmOut),
  );
}

function renderQuestionForm(panel: HTMLElement, api: ApiClient): void {
  const id = h("input", { placeholder: "question id" });
  const category = h("select", {});
  CATEGORIES.forEach((c) => category.append(h("option", { value: c }, c)));
  const text = h("textarea", { placeholder: "Question text" });
  const choiceInputs = [0, 1, 2, 3].map((i) =>
    h("input", { placeholder: `Choice ${i + 1}` }),
  );
  const correct = h("select", {});
  choiceInputs.forEach((_, i) =>
    correct.append(h("option", { value: String(i) }, `Choice ${i + 1} is correct`)),
  );
  const defectsEl = h("ul", { class: "error" });
  const status = h("p", {});
  const submit = h("button", { class: "primary" }, "Save question");

  submit.addEventListener("click", async () => {
    clear(defectsEl);
    status.textContent = "";
    const draft = {
      id: id.value,
      category: category.value,
      text: text.value,
      choices: choiceInputs.map((c) => c.value),
      correctIndex: Number(correct.value),
    };
    // mirror of the server rules: defects stop the request client-side
    const defects = questionDefects(draft);
    if (defects.length > 0) {
      defects.forEach((d) => defectsEl.append(h("li", {}, d)));
      return;
    }
    try {
      await api.addQuestion({
        id: draft.id,
        category: draft.category,
        text: draft.text,
        choices: draft.choices,
        correct_index: draft.correctIndex,
      });
      status.textContent = `saved ${draft.id}`;
      id.value = "";
      text.value = "";
      choiceInputs.forEach((c) => (c.value = ""));
    } catch (e) {
      if (e instanceof ApiFailure && e.defects) {
        e.defects.forEach((d) => defectsEl.append(h("li", {}, d)));
      } else {
        status.textContent = failureText(e);
      }
    }
  });

  show(
    panel,
    h(
      "section",
      { class: "card" },
      h("h2", {}, "Insert or update a question"),
      id,
      category,
      text,
      ...choiceInputs,
      correct,
      submit,
      defectsEl,
      status,
    ),
  );
}

async function renderResults(panel: HTMLElement, api: ApiClient): Promise<void> {
  let results: StoredResult[];
  try {
    results = await api.results();
  } catch (e) {
    show(panel, h("p", { class: "error" }, failureText(e)));
    return;
  }
  const categories = CATEGORIES.filter((c) =>
    results.some((r) => c in r.per_category_score),
  );
  const resultsTable = h(
    "table",
    { class: "scores" },
    h(
      "tr",
      {},
      h("th", {}, "First Name"),
      h("th", {}, "Last Name"),
      ...categories.map((c) => h("th", {}, c)),
      h("th", {}, "Final"),
      h("th", {}, "Time"),
    ),
    ...results.map((r) =>
      h(
        "tr",
        {},
        h("td", {}, r.first_name),
        h("td", {}, r.last_name),
        ...categories.map((c) => h("td", {}, String(r.per_category_score[c] ?? 0))),
        h("td", {}, String(r.final_score)),
        h("td", {}, renderElapsed(r.elapsed_seconds)),
      ),
    ),
  );

  const skillRows = results
    .map((r) => ({
      name: `${r.first_name} ${r.last_name}`,
      labels: skillLabels(r.per_category_score),
    }))
    .sort((a, b) => a.name.localeCompare(b.name));
  const skillsTable = h(
    "table",
    { class: "scores" },
    h(
      "tr",
      {},
      h("th", {}, "Student Name"),
      h("th", {}, "Best Skills"),
      h("th", {}, "Poor Skills"),
    ),
    ...skillRows.map((row) =>
      h(
        "tr",
        {},
        h("td", {}, row.name),
        h("td", {}, row.labels.best),
        h("td", {}, row.labels.poor),
      ),
    ),
  );

  show(
    panel,
    h("section", { class: "card" }, h("h2", {}, "Results"), resultsTable),
    h("section", { class: "card" }, h("h2", {}, "Skills"), skillsTable),
    h("p", {}, h("a", { href: api.resultsCsvUrl(), download: "results.csv" }, "Download CSV")),
  );
}

export function renderElapsed(seconds: number): string {
  const minutes = Math.floor(seconds / 60);
  const secs = seconds % 60;
  return `${minutes}.${secs.toString().padStart(2, "0")} Sec`;
}

function failureText(e: unknown): string {
  if (e instanceof ApiFailure) {
    return `${e.code}: ${e.message}`;
  }
  return "request failed";
}
