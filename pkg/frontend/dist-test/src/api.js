// Thin client for the session HTTP API.
export class ApiError extends Error {
    status;
    diagnostics;
    constructor(status, message, diagnostics = []) {
        super(message);
        this.status = status;
        this.diagnostics = diagnostics;
    }
}
async function request(base, method, path, body) {
    const resp = await fetch(base + path, {
        method,
        headers: body === undefined ? {} : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (resp.status === 204) {
        return undefined;
    }
    const doc = await resp.json().catch(() => ({}));
    if (!resp.ok) {
        const diagnostics = Array.isArray(doc.diagnostics) ? doc.diagnostics : [];
        const message = diagnostics.length
            ? diagnostics.map((d) => `line ${d.line}: ${d.message}`).join("; ")
            : (doc.detail ?? `HTTP ${resp.status}`);
        throw new ApiError(resp.status, message, diagnostics);
    }
    return doc;
}
export function createSession(base, source) {
    return request(base, "POST", "/api/sessions", { source });
}
export function getEntry(base, id) {
    return request(base, "GET", `/api/sessions/${id}`);
}
export function stepSession(base, id) {
    return request(base, "POST", `/api/sessions/${id}/step`);
}
export function backSession(base, id) {
    return request(base, "POST", `/api/sessions/${id}/back`);
}
export function resetSession(base, id) {
    return request(base, "POST", `/api/sessions/${id}/reset`);
}
export function deleteSession(base, id) {
    return request(base, "DELETE", `/api/sessions/${id}`);
}
export function simplifySource(base, source) {
    return request(base, "POST", "/api/simplify", { source });
}
