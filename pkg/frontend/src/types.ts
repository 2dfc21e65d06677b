// JSON protocol shapes exchanged with the SimpliPy service.

export type ValueJson =
  | number
  | string
  | boolean
  | null
  | { bottom: true }
  | { closure: { entry: number; params: string[]; defEnv: number } };

export interface StatusJson {
  kind: "running" | "finished" | "errored";
  error?: { kind: string; loc: number };
}

export interface StateJson {
  envs: Record<string, Record<string, ValueJson>>;
  parents: Record<string, number>;
  stack: { loc: number; env: number }[]; // top first
  status: StatusJson;
}

export interface CfgNodeJson {
  loc: number;
  category: string;
}

export interface CfgEdgeJson {
  from: number;
  to: number;
  label: string;
}

export interface CfgJson {
  nodes: CfgNodeJson[];
  edges: CfgEdgeJson[];
}

export interface ScopeJson {
  block: number;
  extent: [number, number];
  parent: number | null;
  params: string[];
  locals: string[];
  nonlocals: string[];
  globals: string[];
}

export interface DiagnosticJson {
  severity: string;
  line: number;
  column: number;
  code: string;
  message: string;
}

export interface EntryJson {
  state: StateJson;
  label: string;
  preLoc: number;
  cursor: number;
  total: number;
}

export interface CreateSessionJson {
  sessionId: string;
  diagnostics: DiagnosticJson[];
  state: StateJson;
  cfg: CfgJson;
  scopes: ScopeJson[];
  abstraction: Record<string, string>;
}

export interface SimplifyJson {
  output: string | null;
  applied: string[];
  diagnostics: DiagnosticJson[];
  lineMap: Record<string, number>;
}
