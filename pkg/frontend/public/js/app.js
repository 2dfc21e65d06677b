// Browser glue: wires the controls to the API and re-renders every view
// from each response.  The server is the single source of truth; the only
// client state is the session id and the editor buffer.
import { ApiError, backSession, createSession, getEntry, resetSession, simplifySource, stepSession, } from "./api.js";
import { cfgToDot } from "./dot.js";
import { renderAll } from "./render.js";
import { buildViewModel } from "./viewmodel.js";
const BASE = "";
let session = null;
let pending = false;
function el(id) {
    const node = document.getElementById(id);
    if (!node) {
        throw new Error(`missing element #${id}`);
    }
    return node;
}
function setBanner(message) {
    const banner = el("banner");
    banner.textContent = message ?? "";
    banner.classList.toggle("visible", message !== null);
}
function setButtonsEnabled() {
    const running = session !== null;
    for (const id of ["btn-step", "btn-back", "btn-reset"]) {
        (el(id)).disabled = pending || !running;
    }
    el("btn-start").disabled = pending;
    el("btn-simplify").disabled = pending;
}
function renderEntry(entry) {
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
async function guarded(action) {
    if (pending) {
        return;
    }
    pending = true;
    setButtonsEnabled();
    try {
        await action();
        setBanner(null);
    }
    catch (err) {
        setBanner(err instanceof ApiError ? err.message : String(err));
    }
    finally {
        pending = false;
        setButtonsEnabled();
    }
}
async function start() {
    const source = el("editor").value;
    const created = await createSession(BASE, source);
    session = {
        id: created.sessionId,
        sourceLines: source.split("\n"),
        cfg: created.cfg,
    };
    renderEntry(await getEntry(BASE, created.sessionId));
}
async function simplifyBuffer() {
    const editor = el("editor");
    const result = await simplifySource(BASE, editor.value);
    if (result.output === null) {
        const lines = result.diagnostics.map((d) => `line ${d.line}: ${d.message}`);
        throw new ApiError(422, lines.join("; "), result.diagnostics);
    }
    editor.value = result.output;
    session = null; // simplification starts over with a fresh session
    await start();
}
function main() {
    el("btn-start").addEventListener("click", () => void guarded(start));
    el("btn-simplify").addEventListener("click", () => void guarded(simplifyBuffer));
    el("btn-step").addEventListener("click", () => void guarded(async () => {
        if (session) {
            renderEntry(await stepSession(BASE, session.id));
        }
    }));
    el("btn-back").addEventListener("click", () => void guarded(async () => {
        if (session) {
            renderEntry(await backSession(BASE, session.id));
        }
    }));
    el("btn-reset").addEventListener("click", () => void guarded(async () => {
        if (session) {
            renderEntry(await resetSession(BASE, session.id));
        }
    }));
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
