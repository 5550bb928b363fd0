// Unsubmitted answers survive page reloads via localStorage. Storage can be
// unavailable (privacy mode, quota), so every call is best-effort.

export interface Draft {
  answers: Record<string, string>;
  comment: string;
}

const hasStorage = (): boolean => {
  try {
    return typeof localStorage !== "undefined";
  } catch {
    return false;
  }
};

export const draftKey = (reviewer: string, round: number, cveId: string): string =>
  `ats-draft:${reviewer}:${round}:${cveId}`;

export const loadDraft = (key: string): Draft | null => {
  if (!hasStorage()) return null;
  try {
    const raw = localStorage.getItem(key);
    if (raw === null) return null;
    const parsed = JSON.parse(raw) as Partial<Draft> | null;
    if (typeof parsed !== "object" || parsed === null) return null;
    return {
      answers: parsed.answers && typeof parsed.answers === "object" ? parsed.answers : {},
      comment: typeof parsed.comment === "string" ? parsed.comment : "",
    };
  } catch {
    return null;
  }
};

export const saveDraft = (key: string, draft: Draft): void => {
  if (!hasStorage()) return;
  try {
    localStorage.setItem(key, JSON.stringify(draft));
  } catch {
    // full or blocked storage loses the draft, nothing else
  }
};

export const clearDraft = (key: string): void => {
  if (!hasStorage()) return;
  try {
    localStorage.removeItem(key);
  } catch {
    // ignore
  }
};
