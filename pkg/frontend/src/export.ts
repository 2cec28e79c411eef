// Turns a canvas session into the exact Turtle document the pipeline
// service's own builder would write for the same logical sequence: same
// minted IRIs (class-counter locals), same triples, same canonical
// serialization. Preconditions that the builder enforces by construction
// (single chain, method present, required params filled, input arity) are
// reported as problems tied to canvas elements instead of thrown.

import type { Catalog } from "./catalog.js";
import type {
  CanvasEdge,
  DataEntityNode,
  NodeId,
  StudioSession,
  TaskNode,
} from "./model.js";
import { inputEdges, methodOf, parametersOf } from "./model.js";
import {
  DS,
  RDF_TYPE,
  STANDARD_PREFIXES,
  Triple,
  XSD_BOOLEAN,
  XSD_DOUBLE,
  XSD_INTEGER,
  formatLiteral,
  iri,
  literal,
  localName,
  pipelineNamespace,
  serializeTurtle,
  triple,
} from "./turtle.js";

const NAME_RE = /^[A-Za-z_][A-Za-z0-9_-]*$/;

export type ProblemCode =
  | "bad-name"
  | "empty-pipeline"
  | "double-next"
  | "merged-chain"
  | "multiple-chains"
  | "cycle"
  | "detached-task"
  | "unknown-class"
  | "missing-method"
  | "incompatible-method"
  | "missing-param"
  | "bad-param"
  | "bad-arity"
  | "bad-input"
  | "input-not-ready"
  | "unknown-output"
  | "bad-entity";

export interface ExportProblem {
  readonly code: ProblemCode;
  readonly message: string;
  readonly nodeId?: NodeId;
  readonly edgeId?: string;
}

export interface ExportSuccess {
  readonly ok: true;
  readonly turtle: string;
  readonly pipelineIri: string;
  readonly iriToNode: ReadonlyMap<string, NodeId>;
  readonly problems: readonly [];
}

export interface ExportFailure {
  readonly ok: false;
  readonly problems: readonly ExportProblem[];
}

export type ExportResult = ExportSuccess | ExportFailure;

interface ChainResult {
  readonly order: readonly TaskNode[];
  readonly problems: readonly ExportProblem[];
}

// Orders the (non-ghost) task nodes along their next-task edges. Exactly one
// linear path is acceptable; anything else comes back as problems.
export function chainOrder(session: StudioSession): ChainResult {
  const tasks = session.nodes.filter(
    (n): n is TaskNode => n.kind === "task" && !n.ghost,
  );
  const problems: ExportProblem[] = [];
  if (!tasks.length) {
    return { order: [], problems: [{ code: "empty-pipeline", message: "the pipeline has no tasks" }] };
  }
  const ids = new Set(tasks.map((t) => t.id));
  const outgoing = new Map<NodeId, CanvasEdge[]>();
  const incoming = new Map<NodeId, CanvasEdge[]>();
  for (const e of session.edges) {
    if (e.role !== "next-task" || !ids.has(e.from) || !ids.has(e.to)) continue;
    outgoing.set(e.from, [...(outgoing.get(e.from) ?? []), e]);
    incoming.set(e.to, [...(incoming.get(e.to) ?? []), e]);
  }
  for (const t of tasks) {
    if ((outgoing.get(t.id) ?? []).length > 1) {
      problems.push({
        code: "double-next",
        message: "two next-task edges leave this task; a chain is linear",
        nodeId: t.id,
      });
    }
    if ((incoming.get(t.id) ?? []).length > 1) {
      problems.push({
        code: "merged-chain",
        message: "two next-task edges enter this task; a chain is linear",
        nodeId: t.id,
      });
    }
  }
  const starts = tasks.filter((t) => !(incoming.get(t.id) ?? []).length);
  if (!starts.length) {
    problems.push({ code: "cycle", message: "the task chain has no start; it loops", nodeId: tasks[0].id });
    return { order: [], problems };
  }
  for (const extra of starts.slice(1)) {
    problems.push({
      code: "multiple-chains",
      message: "a second chain starts here; connect it to the main one",
      nodeId: extra.id,
    });
  }
  const order: TaskNode[] = [];
  const seen = new Set<NodeId>();
  let current: TaskNode | undefined = starts[0];
  while (current) {
    if (seen.has(current.id)) {
      problems.push({ code: "cycle", message: "the task chain loops back here", nodeId: current.id });
      break;
    }
    seen.add(current.id);
    order.push(current);
    const next: CanvasEdge | undefined = (outgoing.get(current.id) ?? [])[0];
    current = next ? tasks.find((t) => t.id === next.to) : undefined;
  }
  for (const t of tasks) {
    if (!seen.has(t.id)) {
      problems.push({
        code: "detached-task",
        message: "this task is not connected to the chain",
        nodeId: t.id,
      });
    }
  }
  return { order, problems };
}

function checkParamType(datatype: string, value: unknown): boolean {
  if (datatype === XSD_INTEGER) return typeof value === "number" && Number.isInteger(value);
  if (datatype === XSD_DOUBLE) return typeof value === "number" && Number.isFinite(value);
  if (datatype === XSD_BOOLEAN) return typeof value === "boolean";
  return typeof value === "string";
}

export function exportSession(session: StudioSession, catalog: Catalog): ExportResult {
  const problems: ExportProblem[] = [];
  if (!NAME_RE.test(session.pipelineName)) {
    problems.push({
      code: "bad-name",
      message: `pipeline name '${session.pipelineName}' is not a valid IRI local name`,
    });
  }

  const chain = chainOrder(session);
  problems.push(...chain.problems);

  const namespace = pipelineNamespace(session.pipelineName);
  const counters = new Map<string, number>();
  const mint = (classIri: string): string => {
    const local = localName(classIri);
    const n = (counters.get(local) ?? 0) + 1;
    counters.set(local, n);
    return `${namespace}${local}${n}`;
  };

  const triples: Triple[] = [];
  const iriToNode = new Map<string, NodeId>();
  const pipelineIri = mint(DS + "Pipeline");
  triples.push(triple(pipelineIri, RDF_TYPE, iri(DS + "Pipeline")));
  triples.push(triple(pipelineIri, DS + "hasInputDataPath", literal(session.csvPath)));

  // Declared data entities: name-addressed IRIs, so order never matters.
  const entities = session.nodes.filter(
    (n): n is DataEntityNode => n.kind === "data-entity" && !n.ghost,
  );
  const entityNames = new Set<string>();
  const semanticsIris = new Set(catalog.payload.semantics.map((e) => e.iri));
  const structureIris = new Set(catalog.payload.structures.map((e) => e.iri));
  for (const entity of entities) {
    if (!NAME_RE.test(entity.name)) {
      problems.push({
        code: "bad-entity",
        message: `entity name '${entity.name}' is not a valid IRI local name`,
        nodeId: entity.id,
      });
      continue;
    }
    if (entityNames.has(entity.name)) {
      problems.push({
        code: "bad-entity",
        message: `entity name '${entity.name}' is already used`,
        nodeId: entity.id,
      });
      continue;
    }
    entityNames.add(entity.name);
    if (!semanticsIris.has(entity.semantics) || !structureIris.has(entity.structure)) {
      problems.push({
        code: "bad-entity",
        message: "pick both a data semantics and a data structure",
        nodeId: entity.id,
      });
      continue;
    }
    const entityIri = `${namespace}${entity.name}`;
    iriToNode.set(entityIri, entity.id);
    triples.push(triple(entityIri, RDF_TYPE, iri(DS + "DataEntity")));
    triples.push(triple(entityIri, DS + "hasSourceColumn", literal(entity.sourceColumn)));
    triples.push(triple(entityIri, DS + "hasDataSemantics", iri(entity.semantics)));
    triples.push(triple(entityIri, DS + "hasDataStructure", iri(entity.structure)));
  }

  // Task outputs become addressable once the producing task is minted.
  const outputIris = new Map<NodeId, Map<string, string>>();
  const chainIndex = new Map<NodeId, number>(chain.order.map((t, i) => [t.id, i]));

  let previous = pipelineIri;
  for (const [position, task] of chain.order.entries()) {
    const spec = catalog.task(task.classIri);
    if (!spec) {
      problems.push({
        code: "unknown-class",
        message: `unknown task class ${task.classIri}`,
        nodeId: task.id,
      });
      continue;
    }
    const method = methodOf(session, task.id);
    if (!method) {
      problems.push({
        code: "missing-method",
        message: `${spec.label} needs a method`,
        nodeId: task.id,
      });
      continue;
    }
    const methodSpec = catalog.method(method.classIri);
    if (!methodSpec || !spec.methods.includes(method.classIri)) {
      problems.push({
        code: "incompatible-method",
        message: `${localName(method.classIri)} cannot solve ${spec.label}`,
        nodeId: method.id,
      });
      continue;
    }

    const taskIri = mint(task.classIri);
    const methodIri = mint(method.classIri);
    iriToNode.set(taskIri, task.id);
    iriToNode.set(methodIri, method.id);
    triples.push(triple(taskIri, RDF_TYPE, iri(task.classIri)));
    triples.push(triple(methodIri, RDF_TYPE, iri(method.classIri)));
    triples.push(triple(taskIri, DS + "hasMethod", iri(methodIri)));

    const byName = new Map(parametersOf(session, method.id).map((p) => [p.name, p]));
    for (const paramSpec of methodSpec.params) {
      const node = byName.get(paramSpec.name);
      const value = node?.value ?? paramSpec.default;
      if (value === null || value === undefined) {
        if (paramSpec.required) {
          problems.push({
            code: "missing-param",
            message: `${methodSpec.label} needs '${paramSpec.name}'`,
            nodeId: node?.id ?? method.id,
          });
        }
        continue;
      }
      if (!checkParamType(paramSpec.datatype, value)) {
        problems.push({
          code: "bad-param",
          message: `'${paramSpec.name}' has the wrong type`,
          nodeId: node?.id ?? method.id,
        });
        continue;
      }
      triples.push(triple(methodIri, paramSpec.property, formatLiteral(value, paramSpec.datatype)));
    }

    const inputs = inputEdges(session, task.id).filter((e) => {
      const source = session.nodes.find((n) => n.id === e.from);
      return source !== undefined && !("ghost" in source && source.ghost);
    });
    const upper = spec.max_inputs === null ? "unbounded" : String(spec.max_inputs);
    if (inputs.length < spec.min_inputs || (spec.max_inputs !== null && inputs.length > spec.max_inputs)) {
      problems.push({
        code: "bad-arity",
        message: `${spec.label} takes ${spec.min_inputs}..${upper} inputs, got ${inputs.length}`,
        nodeId: task.id,
      });
    }
    let slot = 0;
    for (const edge of inputs) {
      const source = session.nodes.find((n) => n.id === edge.from);
      let inputIri: string | null = null;
      if (source?.kind === "data-entity") {
        inputIri = entityNames.has(source.name) ? `${namespace}${source.name}` : null;
        if (inputIri === null) {
          problems.push({
            code: "bad-input",
            message: "this input comes from an entity that cannot be exported",
            edgeId: edge.id,
            nodeId: task.id,
          });
        }
      } else if (source?.kind === "task") {
        const producerIndex = chainIndex.get(source.id);
        if (producerIndex === undefined || producerIndex >= position) {
          problems.push({
            code: "input-not-ready",
            message: "an input must come from an earlier task in the chain",
            edgeId: edge.id,
            nodeId: task.id,
          });
        } else {
          inputIri = outputIris.get(source.id)?.get(edge.fromOutput ?? "") ?? null;
          if (inputIri === null) {
            problems.push({
              code: "unknown-output",
              message: `no output named '${edge.fromOutput ?? ""}' to draw from`,
              edgeId: edge.id,
              nodeId: task.id,
            });
          }
        }
      } else {
        problems.push({
          code: "bad-input",
          message: "only data entities and task outputs can feed a task",
          edgeId: edge.id,
          nodeId: task.id,
        });
      }
      if (inputIri !== null) {
        slot++;
        triples.push(triple(taskIri, DS + "hasInput", iri(inputIri)));
        triples.push(triple(taskIri, `${DS}hasInput${slot}`, iri(inputIri)));
      }
    }

    const taskLocal = localName(taskIri);
    const mine = new Map<string, string>();
    for (const [i, out] of spec.outputs.entries()) {
      const outIri = `${namespace}${taskLocal}_${out.name}`;
      mine.set(out.name, outIri);
      iriToNode.set(outIri, task.id);
      triples.push(triple(outIri, RDF_TYPE, iri(DS + "DataEntity")));
      triples.push(triple(outIri, DS + "hasDataSemantics", iri(out.semantics)));
      triples.push(triple(outIri, DS + "hasDataStructure", iri(out.structure)));
      triples.push(triple(taskIri, DS + "hasOutput", iri(outIri)));
      triples.push(triple(taskIri, `${DS}hasOutput${i + 1}`, iri(outIri)));
    }
    outputIris.set(task.id, mine);

    triples.push(triple(previous, DS + "hasNextTask", iri(taskIri)));
    previous = taskIri;
  }

  if (problems.length) return { ok: false, problems };
  const turtle = serializeTurtle(triples, { ...STANDARD_PREFIXES, exe: namespace });
  return { ok: true, turtle, pipelineIri, iriToNode, problems: [] };
}
