// Deterministic layered CFG layout: one node per row in location order,
// forward edges bulge right, backward edges bulge left.
export const NODE_WIDTH = 120;
export const NODE_HEIGHT = 32;
export const ROW_GAP = 64;
export const COLUMN_X = 170;
export const TOP_MARGIN = 28;
export function layoutCfg(cfg) {
    const order = [...cfg.nodes].sort((a, b) => a.loc - b.loc);
    const rows = new Map();
    order.forEach((node, i) => rows.set(node.loc, i));
    const nodes = order.map((node, i) => ({
        loc: node.loc,
        x: COLUMN_X,
        y: TOP_MARGIN + i * ROW_GAP + NODE_HEIGHT / 2,
    }));
    const byLoc = new Map(nodes.map((n) => [n.loc, n]));
    const edges = [...cfg.edges]
        .sort((a, b) => a.from - b.from || a.to - b.to || a.label.localeCompare(b.label))
        .map((edge) => {
        const a = byLoc.get(edge.from);
        const b = byLoc.get(edge.to);
        if (!a || !b) {
            throw new Error(`edge ${edge.from}->${edge.to} has a missing endpoint`);
        }
        const down = edge.to > edge.from;
        const straight = edge.to === edge.from + 1;
        const y1 = a.y + (down ? NODE_HEIGHT / 2 : -NODE_HEIGHT / 2);
        const y2 = b.y + (down ? -NODE_HEIGHT / 2 : NODE_HEIGHT / 2);
        if (straight) {
            return {
                ...edge,
                d: `M ${a.x} ${y1} L ${b.x} ${y2}`,
                labelX: a.x + 8,
                labelY: (y1 + y2) / 2,
            };
        }
        const span = Math.min(Math.abs(rows.get(edge.to) - rows.get(edge.from)), 6);
        const bulge = (down ? 1 : -1) * (NODE_WIDTH / 2 + 18 + span * 10);
        const cx = COLUMN_X + bulge;
        const midY = (a.y + b.y) / 2;
        return {
            ...edge,
            d: `M ${a.x} ${y1} Q ${cx} ${midY} ${b.x} ${y2}`,
            labelX: COLUMN_X + bulge * 0.72,
            labelY: midY,
        };
    });
    const maxBulge = NODE_WIDTH / 2 + 18 + 6 * 10 + 30;
    return {
        width: COLUMN_X + maxBulge + 40,
        height: TOP_MARGIN * 2 + order.length * ROW_GAP,
        nodes,
        edges,
    };
}
