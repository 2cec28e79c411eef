// Canvas data model: nodes, edges, and a studio session. Method nodes hang
// off their task, parameter nodes hang off their method and own the edited
// value, so every piece of the eventual graph is a first-class element the
// UI can point at when a validation report comes back.

import type { Catalog, CatalogParam } from "./catalog.js";

export type NodeId = string;
export type EdgeId = string;

export interface Position {
  x: number;
  y: number;
}

export type ParamValue = number | string | boolean | null;

export interface TaskNode {
  readonly id: NodeId;
  readonly kind: "task";
  readonly classIri: string;
  position: Position;
  ghost: boolean;
}

export interface MethodNode {
  readonly id: NodeId;
  readonly kind: "method";
  readonly classIri: string;
  readonly taskId: NodeId;
  position: Position;
  ghost: boolean;
}

export interface ParameterNode {
  readonly id: NodeId;
  readonly kind: "parameter";
  // The schema property this parameter is written under.
  readonly classIri: string;
  readonly methodId: NodeId;
  readonly name: string;
  readonly datatype: string;
  readonly required: boolean;
  value: ParamValue;
  position: Position;
}

export interface DataEntityNode {
  readonly id: NodeId;
  readonly kind: "data-entity";
  name: string;
  sourceColumn: string;
  semantics: string;
  structure: string;
  position: Position;
  ghost: boolean;
}

export type CanvasNode = TaskNode | MethodNode | ParameterNode | DataEntityNode;

export type EdgeRole = "dataflow" | "next-task";

export interface CanvasEdge {
  readonly id: EdgeId;
  readonly from: NodeId;
  readonly to: NodeId;
  readonly role: EdgeRole;
  // Set when `from` is a task node: names which of its outputs flows.
  readonly fromOutput?: string;
}

export interface DatasetColumn {
  readonly name: string;
  readonly type: "numeric" | "string";
}

export interface DatasetInfo {
  readonly filename: string;
  readonly columns: readonly DatasetColumn[];
  readonly sampledRows: number;
  readonly text: string;
}

export interface ViolationJson {
  readonly focus_node: string;
  readonly kind: string;
  readonly path: string | null;
  readonly message: string;
}

export interface ReportJson {
  readonly conforms: boolean;
  readonly violations: readonly ViolationJson[];
}

export interface StudioSession {
  pipelineName: string;
  csvPath: string;
  nodes: CanvasNode[];
  edges: CanvasEdge[];
  dataset: DatasetInfo | null;
  lastValidation: ReportJson | null;
  lastRun: unknown;
  nextId: number;
}

export function newSession(pipelineName = "pipeline", csvPath = "data.csv"): StudioSession {
  return {
    pipelineName,
    csvPath,
    nodes: [],
    edges: [],
    dataset: null,
    lastValidation: null,
    lastRun: null,
    nextId: 1,
  };
}

function mintId(session: StudioSession, prefix: string): string {
  return `${prefix}${session.nextId++}`;
}

export function findNode(session: StudioSession, id: NodeId): CanvasNode | undefined {
  return session.nodes.find((n) => n.id === id);
}

export function taskNodes(session: StudioSession): TaskNode[] {
  return session.nodes.filter((n): n is TaskNode => n.kind === "task");
}

export function methodOf(session: StudioSession, taskId: NodeId): MethodNode | undefined {
  return session.nodes.find(
    (n): n is MethodNode => n.kind === "method" && n.taskId === taskId,
  );
}

export function parametersOf(session: StudioSession, methodId: NodeId): ParameterNode[] {
  return session.nodes.filter(
    (n): n is ParameterNode => n.kind === "parameter" && n.methodId === methodId,
  );
}

// Dataflow edges into a task, in creation order; that order is the input
// order of the exported graph.
export function inputEdges(session: StudioSession, taskId: NodeId): CanvasEdge[] {
  return session.edges.filter((e) => e.role === "dataflow" && e.to === taskId);
}

export function addTaskNode(
  session: StudioSession,
  classIri: string,
  position: Position,
  ghost = false,
): TaskNode {
  const node: TaskNode = {
    id: mintId(session, "task"),
    kind: "task",
    classIri,
    position,
    ghost,
  };
  session.nodes.push(node);
  return node;
}

export function addDataEntityNode(
  session: StudioSession,
  fields: { name: string; sourceColumn: string; semantics: string; structure: string },
  position: Position,
  ghost = false,
): DataEntityNode {
  const node: DataEntityNode = {
    id: mintId(session, "data"),
    kind: "data-entity",
    position,
    ghost,
    ...fields,
  };
  session.nodes.push(node);
  return node;
}

function defaultParamValue(p: CatalogParam): ParamValue {
  return p.default !== null ? p.default : null;
}

// Attaches (or replaces) the method of a task, creating one parameter node
// per declared parameter, prefilled with the schema default where one exists.
export function setMethod(
  session: StudioSession,
  catalog: Catalog,
  taskId: NodeId,
  methodClassIri: string,
): MethodNode {
  const task = findNode(session, taskId);
  if (!task || task.kind !== "task") throw new Error(`no task node ${taskId}`);
  removeMethod(session, taskId);
  const spec = catalog.method(methodClassIri);
  const node: MethodNode = {
    id: mintId(session, "method"),
    kind: "method",
    classIri: methodClassIri,
    taskId,
    position: { x: task.position.x, y: task.position.y + 64 },
    ghost: task.ghost,
  };
  session.nodes.push(node);
  for (const [i, p] of (spec?.params ?? []).entries()) {
    const param: ParameterNode = {
      id: mintId(session, "param"),
      kind: "parameter",
      classIri: p.property,
      methodId: node.id,
      name: p.name,
      datatype: p.datatype,
      required: p.required,
      value: defaultParamValue(p),
      position: { x: node.position.x + 16, y: node.position.y + 40 + 28 * i },
    };
    session.nodes.push(param);
  }
  return node;
}

export function removeMethod(session: StudioSession, taskId: NodeId): void {
  const method = methodOf(session, taskId);
  if (!method) return;
  session.nodes = session.nodes.filter(
    (n) => n.id !== method.id && !(n.kind === "parameter" && n.methodId === method.id),
  );
}

export function setParam(session: StudioSession, paramNodeId: NodeId, value: ParamValue): void {
  const node = findNode(session, paramNodeId);
  if (!node || node.kind !== "parameter") throw new Error(`no parameter node ${paramNodeId}`);
  node.value = value;
}

export function connectData(
  session: StudioSession,
  from: NodeId,
  toTaskId: NodeId,
  fromOutput?: string,
): CanvasEdge {
  const edge: CanvasEdge = {
    id: mintId(session, "edge"),
    from,
    to: toTaskId,
    role: "dataflow",
    ...(fromOutput !== undefined ? { fromOutput } : {}),
  };
  session.edges.push(edge);
  return edge;
}

export function connectNext(session: StudioSession, fromTaskId: NodeId, toTaskId: NodeId): CanvasEdge {
  const edge: CanvasEdge = {
    id: mintId(session, "edge"),
    from: fromTaskId,
    to: toTaskId,
    role: "next-task",
  };
  session.edges.push(edge);
  return edge;
}

export function removeEdge(session: StudioSession, edgeId: EdgeId): void {
  session.edges = session.edges.filter((e) => e.id !== edgeId);
}

// Removes a node along with its dependents: a task takes its method,
// parameters, and edges with it; a method takes its parameters.
export function removeNode(session: StudioSession, id: NodeId): void {
  const node = findNode(session, id);
  if (!node) return;
  const doomed = new Set<NodeId>([id]);
  if (node.kind === "task") {
    const method = methodOf(session, id);
    if (method) doomed.add(method.id);
  }
  for (const n of session.nodes) {
    if (n.kind === "parameter" && doomed.has(n.methodId)) doomed.add(n.id);
  }
  session.nodes = session.nodes.filter((n) => !doomed.has(n.id));
  session.edges = session.edges.filter((e) => !doomed.has(e.from) && !doomed.has(e.to));
}

// Turns ghost nodes (a rendered recommendation) into ordinary editable ones.
export function materializeGhosts(session: StudioSession): void {
  for (const n of session.nodes) {
    if (n.kind !== "parameter") n.ghost = false;
  }
}

export function clearGhosts(session: StudioSession): void {
  const ghostIds = new Set(
    session.nodes.filter((n) => n.kind !== "parameter" && n.ghost).map((n) => n.id),
  );
  for (const n of session.nodes) {
    if (n.kind === "parameter" && ghostIds.has(n.methodId)) ghostIds.add(n.id);
  }
  session.nodes = session.nodes.filter((n) => !ghostIds.has(n.id));
  session.edges = session.edges.filter((e) => !ghostIds.has(e.from) && !ghostIds.has(e.to));
}
