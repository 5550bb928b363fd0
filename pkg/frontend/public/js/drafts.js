// Unsubmitted answers survive page reloads via localStorage. Storage can be
// unavailable (privacy mode, quota), so every call is best-effort.
const hasStorage = () => {
    try {
        return typeof localStorage !== "undefined";
    }
    catch {
        return false;
    }
};
export const draftKey = (reviewer, round, cveId) => `ats-draft:${reviewer}:${round}:${cveId}`;
export const loadDraft = (key) => {
    if (!hasStorage())
        return null;
    try {
        const raw = localStorage.getItem(key);
        if (raw === null)
            return null;
        const parsed = JSON.parse(raw);
        if (typeof parsed !== "object" || parsed === null)
            return null;
        return {
            answers: parsed.answers && typeof parsed.answers === "object" ? parsed.answers : {},
            comment: typeof parsed.comment === "string" ? parsed.comment : "",
        };
    }
    catch {
        return null;
    }
};
export const saveDraft = (key, draft) => {
    if (!hasStorage())
        return;
    try {
        localStorage.setItem(key, JSON.stringify(draft));
    }
    catch {
        // full or blocked storage loses the draft, nothing else
    }
};
export const clearDraft = (key) => {
    if (!hasStorage())
        return;
    try {
        localStorage.removeItem(key);
    }
    catch {
        // ignore
    }
};
