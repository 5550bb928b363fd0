// Entry point. A landing form picks the reviewer id and round, then the task
// list renders and submissions go straight to the service that serves this
// page (same origin, so base is empty).

import {
  ApiError,
  RoundTasks,
  SubmitBody,
  fetchTasks,
  listRounds,
  submitResponse,
} from "./api.js";
import {
  RenderOptions,
  TaskView,
  markSubmitted,
  newTaskView,
  renderTask,
  showBanner,
} from "./view.js";

export const makeSubmitHandler = (
  base: string,
  payload: RoundTasks,
): RenderOptions["onSubmit"] => {
  const handler = async (view: TaskView, card: HTMLElement): Promise<void> => {
    const body: SubmitBody = {
      reviewer_id: view.reviewer,
      answers: { ...view.answers },
      comment: view.comment === "" ? null : view.comment,
    };
    try {
      await submitResponse(base, payload.round_number, view.task.cve_id, body);
    } catch (err) {
      if (err instanceof ApiError && err.status === 0) {
        // Never reached the server; worth retrying as-is.
        showBanner(card, "Could not reach the server. Your answers are kept locally.", () => {
          void handler(view, card);
        });
      } else if (err instanceof ApiError) {
        // The server said no (closed round, incomplete answers, ...). Keep
        // everything the reviewer entered and show the diagnostic.
        showBanner(card, `The server rejected the response: ${err.message}`);
      } else {
        showBanner(card, `Unexpected error: ${String(err)}`);
      }
      return;
    }
    markSubmitted(card, view, payload.statements);
  };
  return (view, card) => {
    void handler(view, card);
  };
};

export const renderRound = (
  doc: Document,
  container: HTMLElement,
  payload: RoundTasks,
  reviewer: string,
  base = "",
): TaskView[] => {
  container.textContent = "";
  const onSubmit = makeSubmitHandler(base, payload);
  const views: TaskView[] = [];
  for (const task of payload.tasks) {
    const view = newTaskView(task, payload.statements, reviewer, payload.round_number);
    views.push(view);
    container.appendChild(renderTask(doc, view, payload.statements, { onSubmit }));
  }
  return views;
};

const pageBanner = (doc: Document, message: string, retry?: () => void): void => {
  const banner = doc.getElementById("page-banner");
  if (banner === null) return;
  banner.textContent = "";
  banner.classList.remove("hidden");
  const text = doc.createElement("span");
  text.textContent = message;
  banner.appendChild(text);
  if (retry !== undefined) {
    const button = doc.createElement("button");
    button.type = "button";
    button.className = "retry";
    button.textContent = "Retry";
    button.addEventListener("click", () => {
      banner.classList.add("hidden");
      retry();
    });
    banner.appendChild(button);
  }
};

export const initApp = (doc: Document, base = ""): void => {
  const form = doc.getElementById("landing") as HTMLFormElement | null;
  const reviewerInput = doc.getElementById("reviewer-input") as HTMLInputElement | null;
  const roundSelect = doc.getElementById("round-select") as HTMLSelectElement | null;
  const info = doc.getElementById("round-info");
  const tasks = doc.getElementById("tasks");
  if (form === null || reviewerInput === null || roundSelect === null || info === null || tasks === null) {
    return;
  }

  const fillRounds = async (): Promise<void> => {
    try {
      const rounds = await listRounds(base);
      roundSelect.textContent = "";
      for (const round of rounds) {
        const option = doc.createElement("option");
        option.value = String(round.round_number);
        option.textContent = `round ${round.round_number} (${round.status}, ${round.task_count} tasks)`;
        if (round.status === "open") option.selected = true;
        roundSelect.appendChild(option);
      }
      if (rounds.length === 0) {
        pageBanner(doc, "No survey rounds exist yet.");
      }
    } catch {
      pageBanner(doc, "Could not load the round list.", () => {
        void fillRounds();
      });
    }
  };

  const load = async (): Promise<void> => {
    const reviewer = reviewerInput.value.trim();
    const round = Number(roundSelect.value);
    if (reviewer === "" || !Number.isInteger(round)) return;
    let payload: RoundTasks;
    try {
      payload = await fetchTasks(base, round, reviewer);
    } catch (err) {
      if (err instanceof ApiError && err.status === 0) {
        pageBanner(doc, "Could not reach the server.", () => {
          void load();
        });
      } else {
        pageBanner(doc, `Could not load tasks: ${err instanceof Error ? err.message : String(err)}`);
      }
      return;
    }
    info.textContent = "";
    const heading = doc.createElement("h2");
    heading.textContent = `Round ${payload.round_number} - ${payload.tasks.length} descriptions`;
    const hint = doc.createElement("p");
    hint.textContent =
      payload.status === "open"
        ? `Signed in as ${reviewer}. Rate every statement, then submit each card.`
        : "This round is closed; responses are read-only.";
    info.append(heading, hint);
    renderRound(doc, tasks as HTMLElement, payload, reviewer, base);
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void load();
  });

  void fillRounds();
};

// Browser bootstrap; tests call initApp themselves.
if (typeof document !== "undefined" && document.getElementById("landing") !== null) {
  initApp(document);
}
