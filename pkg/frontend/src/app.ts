// Browser glue: wires the controls to the API and re-renders every view
// from each response.  The server is the single source of truth; the only
// client state is the session id and the editor buffer.

import {
  ApiError,
  backSession,
  createSession,
  getEntry,
  resetSession,
  simplifySource,
  stepSession,
} from "./api.js";
import { cfgToDot } from "./dot.js";
import { renderAll } from "./render.js";
import { buildViewModel } from "./viewmodel.js";
import type { CfgJson, EntryJson } from "./types.js";

const BASE = "";

interface SessionHandle {
  id: string;
  sourceLines: string[];
  cfg: CfgJson;
}

let session: SessionHandle | null = null;
let pending = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function setBanner(message: string | null): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = message ?? "";
  banner.classList.toggle("visible", message !== null);
}

function setButtonsEnabled(): void {
  const running = session !== null;
  for (const id of ["btn-step", "btn-back", "btn-reset"]) {
    (el<HTMLButtonElement>(id)).disabled = pending || !running;
  }
  el<HTMLButtonElement>("btn-start").disabled = pending;
  el<HTMLButtonElement>("btn-simplify").disabled = pending;
}

function renderEntry(entry: EntryJson): void {
  if (!session) {
    return;
  }
  const vm = buildViewModel(session.sourceLines, entry, session.cfg);
  const views = renderAll(vm);
  el("source-panel").innerHTML = views.source;
  el("env-panel").innerHTML = views.envTree;
  el("stack-panel").innerHTML = views.stack;
  el("cfg-panel").innerHTML = views.cfg;
  el("cursor-indicator").textContent = `step ${vm.cursor} / ${vm.total - 1}`;
  if (vm.label === "call" || vm.label === "return") {
    // no CFG edge for dynamic transfers: pulse the stack view instead
    el("stack-panel").classList.remove("pulse");
    void el("stack-panel").offsetWidth; // restart the animation
    el("stack-panel").classList.add("pulse");
  }
}

async function guarded(action: () => Promise<void>): Promise<void> {
  if (pending) {
    return;
  }
  pending = true;
  setButtonsEnabled();
  try {
    await action();
    setBanner(null);
  } catch (err) {
    setBanner(err instanceof ApiError ? err.message : String(err));
  } finally {
    pending = false;
    setButtonsEnabled();
  }
}

async function start(): Promise<void> {
  const source = el<HTMLTextAreaElement>("editor").value;
  const created = await createSession(BASE, source);
  session = {
    id: created.sessionId,
    sourceLines: source.split("\n"),
    cfg: created.cfg,
  };
  renderEntry(await getEntry(BASE, created.sessionId));
}

async function simplifyBuffer(): Promise<void> {
  const editor = el<HTMLTextAreaElement>("editor");
  const result = await simplifySource(BASE, editor.value);
  if (result.output === null) {
    const lines = result.diagnostics.map((d) => `line ${d.line}: ${d.message}`);
    throw new ApiError(422, lines.join("; "), result.diagnostics);
  }
  editor.value = result.output;
  session = null; // simplification starts over with a fresh session
  await start();
}

function main(): void {
  el("btn-start").addEventListener("click", () => void guarded(start));
  el("btn-simplify").addEventListener("click", () => void guarded(simplifyBuffer));
  el("btn-step").addEventListener("click", () =>
    void guarded(async () => {
      if (session) {
        renderEntry(await stepSession(BASE, session.id));
      }
    }),
  );
  el("btn-back").addEventListener("click", () =>
    void guarded(async () => {
      if (session) {
        renderEntry(await backSession(BASE, session.id));
      }
    }),
  );
  el("btn-reset").addEventListener("click", () =>
    void guarded(async () => {
      if (session) {
        renderEntry(await resetSession(BASE, session.id));
      }
    }),
  );
  el("btn-toggle-cfg").addEventListener("click", () => {
    el("cfg-panel").classList.toggle("hidden");
  });
  el("btn-dot").addEventListener("click", () => {
    if (!session) {
      return;
    }
    const blob = new Blob([cfgToDot(session.cfg)], { type: "text/vnd.graphviz" });
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = "cfg.dot";
    a.click();
    URL.revokeObjectURL(url);
  });
  setButtonsEnabled();
}

main();
