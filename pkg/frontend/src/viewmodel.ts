// The single render input: everything the four views need, derived from one
// state JSON document so no frame ever mixes data from two steps.

import type { CfgJson, EntryJson, StateJson, StatusJson, ValueJson } from "./types.js";

export interface Binding {
  name: string;
  value: ValueJson;
  rendered: string;
}

export interface EnvTreeNode {
  envId: number;
  parentId: number | null;
  bindings: Binding[];
  children: EnvTreeNode[];
  active: boolean; // some stack frame references this environment
}

export interface HighlightedEdge {
  from: number;
  to: number;
  label: string;
}

export interface ViewModel {
  sourceLines: string[];
  currentLoc: number;
  envTree: EnvTreeNode;
  stack: { loc: number; env: number }[];
  cfg: CfgJson;
  highlightedEdge: HighlightedEdge | null;
  status: StatusJson;
  label: string;
  cursor: number;
  total: number;
}

const SEQUENTIAL_LABELS = new Set(["next", "true", "false"]);

export function renderValue(v: ValueJson): string {
  if (v === null) {
    return "None";
  }
  if (typeof v === "boolean") {
    return v ? "True" : "False";
  }
  if (typeof v === "number") {
    return String(v);
  }
  if (typeof v === "string") {
    return JSON.stringify(v);
  }
  if ("bottom" in v) {
    return "⊥";
  }
  return `closure@${v.closure.entry}(${v.closure.params.join(", ")})`;
}

export function buildEnvTree(state: StateJson): EnvTreeNode {
  const referenced = new Set(state.stack.map((c) => c.env));
  const nodes = new Map<number, EnvTreeNode>();
  const ids = Object.keys(state.envs)
    .map(Number)
    .sort((a, b) => a - b);
  for (const id of ids) {
    const bindings = Object.entries(state.envs[String(id)]).map(([name, value]) => ({
      name,
      value,
      rendered: renderValue(value),
    }));
    nodes.set(id, {
      envId: id,
      parentId: id === 0 ? null : (state.parents[String(id)] ?? null),
      bindings,
      children: [],
      active: referenced.has(id),
    });
  }
  for (const node of nodes.values()) {
    if (node.parentId !== null) {
      nodes.get(node.parentId)?.children.push(node);
    }
  }
  const root = nodes.get(0);
  if (!root) {
    throw new Error("state has no global environment");
  }
  return root;
}

export function buildViewModel(sourceLines: string[], entry: EntryJson, cfg: CfgJson): ViewModel {
  const currentLoc = entry.state.stack[0].loc;
  const highlightedEdge = SEQUENTIAL_LABELS.has(entry.label)
    ? { from: entry.preLoc, to: currentLoc, label: entry.label }
    : null;
  return {
    sourceLines,
    currentLoc,
    envTree: buildEnvTree(entry.state),
    stack: entry.state.stack.slice(),
    cfg,
    highlightedEdge,
    status: entry.state.status,
    label: entry.label,
    cursor: entry.cursor,
    total: entry.total,
  };
}
