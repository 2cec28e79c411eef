// Typed view of GET /catalog plus the lookups the editor needs: indexing by
// IRI, namespace grouping for the palette, and label search.

import { DS, ML, STATS, VISU, localName } from "./turtle.js";

export interface CatalogParam {
  readonly name: string;
  readonly property: string;
  readonly datatype: string;
  readonly default: number | string | boolean | null;
  readonly required: boolean;
}

export interface CatalogMethod {
  readonly iri: string;
  readonly kind: "method";
  readonly label: string;
  readonly parent: string;
  readonly params: readonly CatalogParam[];
}

export interface CatalogOutput {
  readonly name: string;
  readonly semantics: string;
  readonly structure: string;
}

export interface CatalogTask {
  readonly iri: string;
  readonly kind: "task";
  readonly label: string;
  readonly parent: string;
  readonly methods: readonly string[];
  readonly min_inputs: number;
  readonly max_inputs: number | null;
  readonly outputs: readonly CatalogOutput[];
}

export interface CatalogVocabEntry {
  readonly iri: string;
  readonly label: string;
}

export interface CatalogPayload {
  readonly tasks: readonly CatalogTask[];
  readonly methods: readonly CatalogMethod[];
  readonly semantics: readonly CatalogVocabEntry[];
  readonly structures: readonly CatalogVocabEntry[];
}

export class Catalog {
  readonly payload: CatalogPayload;
  private readonly taskByIri = new Map<string, CatalogTask>();
  private readonly methodByIri = new Map<string, CatalogMethod>();

  constructor(payload: CatalogPayload) {
    this.payload = payload;
    for (const t of payload.tasks) this.taskByIri.set(t.iri, t);
    for (const m of payload.methods) this.methodByIri.set(m.iri, m);
  }

  task(iri: string): CatalogTask | undefined {
    return this.taskByIri.get(iri);
  }

  method(iri: string): CatalogMethod | undefined {
    return this.methodByIri.get(iri);
  }

  methodsOf(taskIri: string): CatalogMethod[] {
    const t = this.taskByIri.get(taskIri);
    if (!t) return [];
    return t.methods
      .map((m) => this.methodByIri.get(m))
      .filter((m): m is CatalogMethod => m !== undefined);
  }

  semanticsLabel(iri: string): string {
    return this.payload.semantics.find((e) => e.iri === iri)?.label ?? localName(iri);
  }

  structureLabel(iri: string): string {
    return this.payload.structures.find((e) => e.iri === iri)?.label ?? localName(iri);
  }
}

export interface CatalogGroup {
  readonly namespace: string;
  readonly title: string;
  readonly tasks: readonly CatalogTask[];
}

const GROUP_TITLES: readonly [string, string][] = [
  [DS, "Core"],
  [ML, "Machine Learning"],
  [STATS, "Statistics"],
  [VISU, "Visualization"],
];

function namespaceOf(iri: string): string {
  const cut = iri.lastIndexOf("#");
  return cut >= 0 ? iri.slice(0, cut + 1) : iri;
}

// Palette groups in a fixed namespace order, tasks keeping catalog order.
export function groupTasks(catalog: Catalog): CatalogGroup[] {
  const byNamespace = new Map<string, CatalogTask[]>();
  for (const t of catalog.payload.tasks) {
    const ns = namespaceOf(t.iri);
    const bucket = byNamespace.get(ns) ?? [];
    bucket.push(t);
    byNamespace.set(ns, bucket);
  }
  const groups: CatalogGroup[] = [];
  const known = new Set<string>();
  for (const [ns, title] of GROUP_TITLES) {
    known.add(ns);
    const tasks = byNamespace.get(ns);
    if (tasks) groups.push({ namespace: ns, title, tasks });
  }
  for (const [ns, tasks] of byNamespace) {
    if (!known.has(ns)) groups.push({ namespace: ns, title: ns, tasks });
  }
  return groups;
}

export type CatalogEntry = CatalogTask | CatalogMethod;

// Case-insensitive substring match over labels, tasks before methods.
export function searchCatalog(catalog: Catalog, query: string): CatalogEntry[] {
  const needle = query.trim().toLowerCase();
  if (!needle) return [];
  const hits: CatalogEntry[] = [];
  for (const t of catalog.payload.tasks) {
    if (t.label.toLowerCase().includes(needle)) hits.push(t);
  }
  for (const m of catalog.payload.methods) {
    if (m.label.toLowerCase().includes(needle)) hits.push(m);
  }
  return hits;
}
