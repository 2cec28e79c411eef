// Rebuilds a canvas session from a canonical pipeline document, inverting
// the exporter: importing a document and exporting the resulting session
// reproduces the document byte for byte. Node positions are synthesized on
// a simple grid since documents carry no layout.

import type { Catalog } from "./catalog.js";
import type { StudioSession } from "./model.js";
import {
  addDataEntityNode,
  addTaskNode,
  connectData,
  connectNext,
  newSession,
  parametersOf,
  setMethod,
  setParam,
} from "./model.js";
import {
  DS,
  PIPELINE_NAMESPACE_ROOT,
  RDF_TYPE,
  Term,
  Triple,
  XSD_BOOLEAN,
  XSD_DOUBLE,
  XSD_INTEGER,
  localName,
  parseTurtle,
} from "./turtle.js";

export class ImportError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ImportError";
  }
}

class TripleIndex {
  private readonly bySubject = new Map<string, Triple[]>();

  constructor(triples: readonly Triple[]) {
    for (const t of triples) {
      const bucket = this.bySubject.get(t.subject) ?? [];
      bucket.push(t);
      this.bySubject.set(t.subject, bucket);
    }
  }

  objects(subject: string, predicate: string): Term[] {
    return (this.bySubject.get(subject) ?? [])
      .filter((t) => t.predicate === predicate)
      .map((t) => t.object);
  }

  objectIri(subject: string, predicate: string): string | null {
    for (const o of this.objects(subject, predicate)) {
      if (o.kind === "iri") return o.value;
    }
    return null;
  }

  objectText(subject: string, predicate: string): string | null {
    for (const o of this.objects(subject, predicate)) {
      if (o.kind === "literal") return o.lexical;
    }
    return null;
  }

  subjectsOfType(classIri: string): string[] {
    const out: string[] = [];
    for (const [subject, triples] of this.bySubject) {
      if (triples.some((t) => t.predicate === RDF_TYPE && t.object.kind === "iri" && t.object.value === classIri)) {
        out.push(subject);
      }
    }
    return out.sort();
  }

  types(subject: string): string[] {
    return this.objects(subject, RDF_TYPE)
      .filter((o): o is Extract<Term, { kind: "iri" }> => o.kind === "iri")
      .map((o) => o.value);
  }
}

function paramValueFromLexical(lexical: string, datatype: string): number | string | boolean {
  if (datatype === XSD_INTEGER || datatype === XSD_DOUBLE) {
    const n = Number(lexical);
    if (!Number.isFinite(n)) throw new ImportError(`cannot read number '${lexical}'`);
    return n;
  }
  if (datatype === XSD_BOOLEAN) return lexical === "true";
  return lexical;
}

function pipelineNameFromIri(pipelineIri: string): string {
  const hash = pipelineIri.lastIndexOf("#");
  const ns = hash >= 0 ? pipelineIri.slice(0, hash + 1) : "";
  if (ns.startsWith(PIPELINE_NAMESPACE_ROOT) && ns.endsWith("#")) {
    return ns.slice(PIPELINE_NAMESPACE_ROOT.length, -1);
  }
  return "imported";
}

export function importTurtle(text: string, catalog: Catalog): StudioSession {
  const { triples } = parseTurtle(text);
  const index = new TripleIndex(triples);

  const pipelines = index.subjectsOfType(DS + "Pipeline");
  if (pipelines.length !== 1) {
    throw new ImportError(`expected exactly one pipeline individual, found ${pipelines.length}`);
  }
  const pipelineIri = pipelines[0];
  const session = newSession(
    pipelineNameFromIri(pipelineIri),
    index.objectText(pipelineIri, DS + "hasInputDataPath") ?? "data.csv",
  );

  // Source-backed entities become canvas nodes; produced entities are
  // regenerated by the exporter and only need their producing task known.
  const entityNodeByIri = new Map<string, string>();
  let entityColumn = 0;
  for (const subject of index.subjectsOfType(DS + "DataEntity")) {
    const column = index.objectText(subject, DS + "hasSourceColumn");
    if (column === null) continue;
    const node = addDataEntityNode(
      session,
      {
        name: localName(subject),
        sourceColumn: column,
        semantics: index.objectIri(subject, DS + "hasDataSemantics") ?? "",
        structure: index.objectIri(subject, DS + "hasDataStructure") ?? "",
      },
      { x: 40 + 190 * entityColumn++, y: 24 },
    );
    entityNodeByIri.set(subject, node.id);
  }

  // Walk the chain from the pipeline head; anything task-typed but off the
  // chain is imported detached so nothing silently disappears.
  const chain: string[] = [];
  const seen = new Set<string>();
  let cursor = index.objectIri(pipelineIri, DS + "hasNextTask");
  while (cursor !== null && !seen.has(cursor)) {
    seen.add(cursor);
    chain.push(cursor);
    cursor = index.objectIri(cursor, DS + "hasNextTask");
  }
  const taskIris = [...chain];
  for (const t of triples) {
    if (t.predicate !== RDF_TYPE || t.object.kind !== "iri") continue;
    if (catalog.task(t.object.value) && !seen.has(t.subject)) {
      seen.add(t.subject);
      taskIris.push(t.subject);
    }
  }

  const taskNodeByIri = new Map<string, string>();
  const outputOwner = new Map<string, { taskIri: string; output: string }>();
  for (const [i, taskIri] of taskIris.entries()) {
    const taskClass = index.types(taskIri).find((c) => catalog.task(c));
    if (!taskClass) throw new ImportError(`${taskIri} has no recognizable task class`);
    const spec = catalog.task(taskClass)!;
    const node = addTaskNode(session, taskClass, { x: 40 + 250 * i, y: 170 });
    taskNodeByIri.set(taskIri, node.id);

    const methodIri = index.objectIri(taskIri, DS + "hasMethod");
    if (methodIri !== null) {
      const methodClass = index.types(methodIri).find((c) => catalog.method(c));
      if (!methodClass) throw new ImportError(`${methodIri} has no recognizable method class`);
      const methodNode = setMethod(session, catalog, node.id, methodClass);
      const specs = catalog.method(methodClass)?.params ?? [];
      for (const paramNode of parametersOf(session, methodNode.id)) {
        const paramSpec = specs.find((p) => p.name === paramNode.name);
        const lexical = paramSpec ? index.objectText(methodIri, paramSpec.property) : null;
        setParam(
          session,
          paramNode.id,
          lexical === null ? null : paramValueFromLexical(lexical, paramNode.datatype),
        );
      }
    }

    for (const [slot, out] of spec.outputs.entries()) {
      const outIri = index.objectIri(taskIri, `${DS}hasOutput${slot + 1}`);
      if (outIri !== null) outputOwner.set(outIri, { taskIri, output: out.name });
    }
  }

  for (const taskIri of taskIris) {
    const taskNodeId = taskNodeByIri.get(taskIri)!;
    for (let slot = 1; ; slot++) {
      const inputIri = index.objectIri(taskIri, `${DS}hasInput${slot}`);
      if (inputIri === null) break;
      const entityNode = entityNodeByIri.get(inputIri);
      if (entityNode !== undefined) {
        connectData(session, entityNode, taskNodeId);
        continue;
      }
      const owner = outputOwner.get(inputIri);
      if (owner === undefined) {
        throw new ImportError(`input ${inputIri} is neither a declared entity nor a task output`);
      }
      connectData(session, taskNodeByIri.get(owner.taskIri)!, taskNodeId, owner.output);
    }
  }

  for (let i = 1; i < chain.length; i++) {
    connectNext(session, taskNodeByIri.get(chain[i - 1])!, taskNodeByIri.get(chain[i])!);
  }
  return session;
}
