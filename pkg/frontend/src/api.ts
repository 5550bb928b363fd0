// Typed wrappers around the review service JSON API.

export interface Statement {
  id: string;
  text: string;
  applies_to: string;
}

export interface PriorResponse {
  answers: Record<string, string>;
  comment: string | null;
}

export interface Task {
  cve_id: string;
  original: string;
  versions: Record<string, string>;
  prior: PriorResponse | null;
}

export interface RoundSummary {
  round_number: number;
  status: string;
  task_count: number;
  statements: Statement[];
}

export interface RoundTasks extends RoundSummary {
  tasks: Task[];
}

export interface SubmitBody {
  reviewer_id: string;
  answers: Record<string, string>;
  comment: string | null;
}

export interface SubmitEcho {
  reviewer_id: string;
  cve_id: string;
  round: number;
  answers: Record<string, string>;
  comment: string | null;
}

export interface Decision {
  cve_id: string;
  accepted: boolean;
  response_count: number;
}

export interface ReportRow {
  cve_id: string;
  statement_id: string;
  agree: number;
  neutral: number;
  disagree: number;
  agree_fraction: number;
  accepted: boolean;
}

export interface Report {
  round_number: number;
  status: string;
  warnings: string[];
  rows: ReportRow[];
  decisions: Decision[];
  comments: Record<string, string[]>;
  csv: string;
}

/** Request failure; status 0 means the request never reached the server. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

const request = async (url: string, init?: RequestInit): Promise<unknown> => {
  let res: Response;
  try {
    res = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, err instanceof Error ? err.message : String(err));
  }
  if (!res.ok) {
    let detail = `${res.status} ${res.statusText}`;
    try {
      const body = (await res.json()) as { detail?: unknown };
      if (typeof body.detail === "string") {
        detail = body.detail;
      }
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(res.status, detail);
  }
  return res.json();
};

export const listRounds = (base: string): Promise<RoundSummary[]> =>
  request(`${base}/api/rounds`) as Promise<RoundSummary[]>;

export const fetchTasks = (
  base: string,
  round: number,
  reviewer: string,
): Promise<RoundTasks> =>
  request(
    `${base}/api/rounds/${round}/tasks?reviewer=${encodeURIComponent(reviewer)}`,
  ) as Promise<RoundTasks>;

export const submitResponse = (
  base: string,
  round: number,
  cveId: string,
  body: SubmitBody,
): Promise<SubmitEcho> =>
  request(
    `${base}/api/rounds/${round}/tasks/${encodeURIComponent(cveId)}/response`,
    {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    },
  ) as Promise<SubmitEcho>;

export const closeRound = (
  base: string,
  round: number,
  adminToken: string,
): Promise<Decision[]> =>
  request(`${base}/api/rounds/${round}/close`, {
    method: "POST",
    headers: { "x-admin-token": adminToken },
  }) as Promise<Decision[]>;

export const fetchReport = (base: string, round: number): Promise<Report> =>
  request(`${base}/api/rounds/${round}/report`) as Promise<Report>;
