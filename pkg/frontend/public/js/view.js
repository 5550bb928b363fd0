// Task cards for one survey round: the original description next to each
// simplified version, one agreement scale per statement, and a submit button
// that stays disabled until every statement has a selection.
import { clearDraft, draftKey, loadDraft, saveDraft } from "./drafts.js";
export const ANSWER_VALUES = ["agree", "neutral", "disagree"];
// Wire value -> label shown beside the radio. The neutral label is the full
// phrase, not the wire word.
export const ANSWER_LABELS = {
    agree: "agree",
    neutral: "neither agree nor disagree",
    disagree: "disagree",
};
const isAnswer = (value) => typeof value === "string" && ANSWER_VALUES.includes(value);
/** Every statement needs a selection before the response can go out. */
export const canSubmit = (view, statements) => statements.every((st) => isAnswer(view.answers[st.id]));
/**
 * Initial state for one task. A response already on the server wins over a
 * local draft; otherwise the draft restores whatever the reviewer had typed.
 */
export const newTaskView = (task, statements, reviewer, round) => {
    const view = {
        task,
        round,
        reviewer,
        answers: {},
        comment: "",
        state: "unanswered",
    };
    if (task.prior !== null) {
        for (const st of statements) {
            const got = task.prior.answers[st.id];
            if (isAnswer(got))
                view.answers[st.id] = got;
        }
        view.comment = task.prior.comment ?? "";
        view.state = "submitted";
        return view;
    }
    const draft = loadDraft(draftKey(reviewer, round, task.cve_id));
    if (draft !== null) {
        for (const st of statements) {
            const got = draft.answers[st.id];
            if (isAnswer(got))
                view.answers[st.id] = got;
        }
        view.comment = draft.comment;
        if (Object.keys(view.answers).length > 0 || view.comment !== "") {
            view.state = "draft";
        }
    }
    return view;
};
const persistDraft = (view) => {
    saveDraft(draftKey(view.reviewer, view.round, view.task.cve_id), {
        answers: view.answers,
        comment: view.comment,
    });
};
const STATE_TEXT = {
    unanswered: "Not answered yet.",
    draft: "Draft saved locally.",
    submitted: "Submitted. You can change your answers and resubmit.",
};
const pane = (doc, heading, text) => {
    const box = doc.createElement("div");
    box.className = "pane";
    const h = doc.createElement("h3");
    h.textContent = heading;
    const p = doc.createElement("p");
    p.textContent = text;
    box.append(h, p);
    return box;
};
const refreshCard = (card, view, statements) => {
    const button = card.querySelector("button.submit");
    button.disabled = !canSubmit(view, statements);
    card.querySelector(".task-state").textContent = STATE_TEXT[view.state];
    card.dataset.state = view.state;
};
/** Build the card for one task and wire its inputs to the view state. */
export const renderTask = (doc, view, statements, opts) => {
    const task = view.task;
    const card = doc.createElement("section");
    card.className = "task";
    card.dataset.cve = task.cve_id;
    const title = doc.createElement("h2");
    title.textContent = task.cve_id;
    card.appendChild(title);
    const panes = doc.createElement("div");
    panes.className = "panes";
    panes.appendChild(pane(doc, "Original", task.original));
    for (const key of Object.keys(task.versions).sort()) {
        panes.appendChild(pane(doc, `Simplified ${key}`, task.versions[key]));
    }
    card.appendChild(panes);
    for (const st of statements) {
        const fieldset = doc.createElement("fieldset");
        fieldset.className = "statement";
        fieldset.dataset.statement = st.id;
        const legend = doc.createElement("legend");
        legend.textContent = st.text;
        fieldset.appendChild(legend);
        for (const value of ANSWER_VALUES) {
            const label = doc.createElement("label");
            const radio = doc.createElement("input");
            radio.type = "radio";
            radio.name = `${task.cve_id}:${st.id}`;
            radio.value = value;
            radio.checked = view.answers[st.id] === value;
            radio.addEventListener("change", () => {
                view.answers[st.id] = value;
                if (view.state === "unanswered")
                    view.state = "draft";
                persistDraft(view);
                refreshCard(card, view, statements);
            });
            label.append(radio, ` ${ANSWER_LABELS[value]}`);
            fieldset.appendChild(label);
        }
        card.appendChild(fieldset);
    }
    const comment = doc.createElement("textarea");
    comment.className = "comment";
    comment.placeholder = "Optional comment for the authors";
    comment.value = view.comment;
    comment.addEventListener("input", () => {
        view.comment = comment.value;
        if (view.state === "unanswered")
            view.state = "draft";
        persistDraft(view);
        refreshCard(card, view, statements);
    });
    card.appendChild(comment);
    const footer = doc.createElement("div");
    footer.className = "task-footer";
    const state = doc.createElement("span");
    state.className = "task-state";
    const button = doc.createElement("button");
    button.type = "button";
    button.className = "submit";
    button.textContent = "Submit";
    button.addEventListener("click", () => opts.onSubmit(view, card));
    footer.append(button, state);
    card.appendChild(footer);
    const banner = doc.createElement("div");
    banner.className = "banner hidden";
    card.appendChild(banner);
    refreshCard(card, view, statements);
    return card;
};
/**
 * Problem banner on a card. Answers and drafts are untouched; an optional
 * retry callback gets a button.
 */
export const showBanner = (card, message, retry) => {
    const banner = card.querySelector(".banner");
    const doc = card.ownerDocument;
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
            hideBanner(card);
            retry();
        });
        banner.appendChild(button);
    }
};
export const hideBanner = (card) => {
    const banner = card.querySelector(".banner");
    banner.textContent = "";
    banner.classList.add("hidden");
};
/** After the server accepted the response the local draft has no purpose. */
export const markSubmitted = (card, view, statements) => {
    view.state = "submitted";
    clearDraft(draftKey(view.reviewer, view.round, view.task.cve_id));
    hideBanner(card);
    refreshCard(card, view, statements);
};
