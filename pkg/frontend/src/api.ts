// Thin client for the session HTTP API.

import type { CreateSessionJson, DiagnosticJson, EntryJson, SimplifyJson } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public diagnostics: DiagnosticJson[] = [],
  ) {
    super(message);
  }
}

async function request<T>(base: string, method: string, path: string, body?: unknown): Promise<T> {
  const resp = await fetch(base + path, {
    method,
    headers: body === undefined ? {} : { "content-type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  if (resp.status === 204) {
    return undefined as T;
  }
  const doc = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    const diagnostics = Array.isArray(doc.diagnostics) ? doc.diagnostics : [];
    const message = diagnostics.length
      ? diagnostics.map((d: DiagnosticJson) => `line ${d.line}: ${d.message}`).join("; ")
      : (doc.detail ?? `HTTP ${resp.status}`);
    throw new ApiError(resp.status, message, diagnostics);
  }
  return doc as T;
}

export function createSession(base: string, source: string): Promise<CreateSessionJson> {
  return request(base, "POST", "/api/sessions", { source });
}

export function getEntry(base: string, id: string): Promise<EntryJson> {
  return request(base, "GET", `/api/sessions/${id}`);
}

export function stepSession(base: string, id: string): Promise<EntryJson> {
  return request(base, "POST", `/api/sessions/${id}/step`);
}

export function backSession(base: string, id: string): Promise<EntryJson> {
  return request(base, "POST", `/api/sessions/${id}/back`);
}

export function resetSession(base: string, id: string): Promise<EntryJson> {
  return request(base, "POST", `/api/sessions/${id}/reset`);
}

export function deleteSession(base: string, id: string): Promise<void> {
  return request(base, "DELETE", `/api/sessions/${id}`);
}

export function simplifySource(base: string, source: string): Promise<SimplifyJson> {
  return request(base, "POST", "/api/simplify", { source });
}
