// Graphviz DOT text for the current CFG, offered as a download.
export function cfgToDot(cfg) {
    const lines = ["digraph cfg {", "  rankdir=TB;"];
    for (const node of [...cfg.nodes].sort((a, b) => a.loc - b.loc)) {
        lines.push(`  ${node.loc} [label="${node.loc}: ${node.category}"];`);
    }
    const edges = [...cfg.edges].sort((a, b) => a.from - b.from || a.label.localeCompare(b.label) || a.to - b.to);
    for (const edge of edges) {
        lines.push(`  ${edge.from} -> ${edge.to} [label="${edge.label}"];`);
    }
    lines.push("}");
    return lines.join("\n");
}
