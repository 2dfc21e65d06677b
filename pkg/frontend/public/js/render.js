// Pure view rendering: ViewModel in, HTML string out.  Same document in,
// same markup out, so every view is snapshot-testable without a browser.
import { layoutCfg, NODE_HEIGHT, NODE_WIDTH } from "./layout.js";
export function escapeHtml(text) {
    return text
        .replaceAll("&", "&amp;")
        .replaceAll("<", "&lt;")
        .replaceAll(">", "&gt;")
        .replaceAll('"', "&quot;");
}
function statusBadge(vm) {
    const { status } = vm;
    if (status.kind === "finished") {
        return '<span class="badge finished">finished</span>';
    }
    if (status.kind === "errored" && status.error) {
        return `<span class="badge errored">error: ${escapeHtml(status.error.kind)} at line ${status.error.loc}</span>`;
    }
    return '<span class="badge running">running</span>';
}
export function renderSource(vm) {
    // exactly one highlighted line (the top frame's location); none once the
    // machine sits at the end-of-program location
    const rows = vm.sourceLines.map((text, i) => {
        const line = i + 1;
        const current = line === vm.currentLoc ? " current" : "";
        return (`<div class="line${current}" data-line="${line}">` +
            `<span class="lineno">${line}</span>` +
            `<code>${escapeHtml(text)}</code></div>`);
    });
    return `<div class="source-view">${statusBadge(vm)}${rows.join("")}</div>`;
}
function renderEnvNode(node) {
    const title = node.envId === 0 ? "env 0 (global)" : `env ${node.envId}`;
    const active = node.active ? " active" : " inactive";
    const bindings = node.bindings
        .map((b) => `<li class="binding"><span class="name">${escapeHtml(b.name)}</span>` +
        ` = <span class="value">${escapeHtml(b.rendered)}</span></li>`)
        .join("");
    const children = node.children.map(renderEnvNode).join("");
    return (`<li class="env-node${active}" data-env="${node.envId}">` +
        `<span class="env-title">${title}</span>` +
        `<ul class="bindings">${bindings}</ul>` +
        (children ? `<ul class="children">${children}</ul>` : "") +
        `</li>`);
}
export function renderEnvTree(vm) {
    return `<div class="env-view"><ul class="env-tree">${renderEnvNode(vm.envTree)}</ul></div>`;
}
export function renderStack(vm) {
    const rows = vm.stack
        .map((frame, i) => {
        const top = i === 0 ? " top" : "";
        return `<li class="frame${top}" data-loc="${frame.loc}" data-env="${frame.env}">(${frame.loc}, ${frame.env})</li>`;
    })
        .join("");
    return `<div class="stack-view"><ol class="stack">${rows}</ol></div>`;
}
export function renderCfg(vm) {
    const layout = layoutCfg(vm.cfg);
    const categories = new Map(vm.cfg.nodes.map((n) => [n.loc, n.category]));
    const hl = vm.highlightedEdge;
    const edges = layout.edges
        .map((edge) => {
        const active = hl && hl.from === edge.from && hl.to === edge.to && hl.label === edge.label ? " active" : "";
        return (`<g class="cfg-edge label-${edge.label}${active}" data-from="${edge.from}" data-to="${edge.to}">` +
            `<path d="${edge.d}" marker-end="url(#arrow)"></path>` +
            `<text x="${edge.labelX}" y="${edge.labelY}">${edge.label}</text></g>`);
    })
        .join("");
    const nodes = layout.nodes
        .map((node) => {
        const label = `${node.loc}: ${categories.get(node.loc) ?? "?"}`;
        const currentNode = node.loc === vm.currentLoc ? " current" : "";
        return (`<g class="cfg-node${currentNode}" data-loc="${node.loc}">` +
            `<rect x="${node.x - NODE_WIDTH / 2}" y="${node.y - NODE_HEIGHT / 2}" width="${NODE_WIDTH}" height="${NODE_HEIGHT}" rx="6"></rect>` +
            `<text x="${node.x}" y="${node.y + 4}">${escapeHtml(label)}</text></g>`);
    })
        .join("");
    return (`<svg class="cfg-view" viewBox="0 0 ${layout.width} ${layout.height}" width="${layout.width}" height="${layout.height}">` +
        `<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto">` +
        `<path d="M 0 0 L 8 4 L 0 8 z"></path></marker></defs>` +
        edges +
        nodes +
        `</svg>`);
}
export function renderAll(vm) {
    return {
        source: renderSource(vm),
        envTree: renderEnvTree(vm),
        stack: renderStack(vm),
        cfg: renderCfg(vm),
    };
}
