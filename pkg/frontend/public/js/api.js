// Typed wrappers around the review service JSON API.
/** Request failure; status 0 means the request never reached the server. */
export class ApiError extends Error {
    constructor(status, detail) {
        super(detail);
        this.name = "ApiError";
        this.status = status;
    }
}
const request = async (url, init) => {
    let res;
    try {
        res = await fetch(url, init);
    }
    catch (err) {
        throw new ApiError(0, err instanceof Error ? err.message : String(err));
    }
    if (!res.ok) {
        let detail = `${res.status} ${res.statusText}`;
        try {
            const body = (await res.json());
            if (typeof body.detail === "string") {
                detail = body.detail;
            }
        }
        catch {
            // non-JSON error body; keep the status line
        }
        throw new ApiError(res.status, detail);
    }
    return res.json();
};
export const listRounds = (base) => request(`${base}/api/rounds`);
export const fetchTasks = (base, round, reviewer) => request(`${base}/api/rounds/${round}/tasks?reviewer=${encodeURIComponent(reviewer)}`);
export const submitResponse = (base, round, cveId, body) => request(`${base}/api/rounds/${round}/tasks/${encodeURIComponent(cveId)}/response`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
});
export const closeRound = (base, round, adminToken) => request(`${base}/api/rounds/${round}/close`, {
    method: "POST",
    headers: { "x-admin-token": adminToken },
});
export const fetchReport = (base, round) => request(`${base}/api/rounds/${round}/report`);
