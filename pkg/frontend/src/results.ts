// Shapes validation reports and run responses into what the UI shows:
// metric rows, plot entries, and most importantly the mapping from report
// focus IRIs back to canvas elements so every violation highlights the node
// it is about.

import type { PlotJson, RunFailureJson, RunResponseJson, ValueJson } from "./api.js";
import type { NodeId, ReportJson, ViolationJson } from "./model.js";
import { localName } from "./turtle.js";

// Mirrors the service's own score rendering: percent with up to six
// significant digits and no trailing zeros.
export function percentText(fraction: number): string {
  const scaled = Number((fraction * 100).toPrecision(6));
  return `${String(scaled)}%`;
}

export interface MetricRow {
  readonly iri: string;
  readonly name: string;
  readonly text: string;
}

function singleText(name: string, value: number | string | boolean): string {
  if (typeof value === "number" && name.endsWith("_score")) return percentText(value);
  return String(value);
}

function valueText(name: string, v: ValueJson): string {
  if (v.kind === "single" && v.value !== undefined) return singleText(name, v.value);
  if (v.kind === "vector") return `vector of ${v.length ?? v.values?.length ?? 0}`;
  if (v.kind === "matrix") return `matrix ${v.rows ?? "?"}x${v.cols ?? "?"}`;
  if (v.kind === "model") return `${v.algorithm ?? "model"}`;
  return JSON.stringify(v);
}

// One row per binding, single values first so scores lead the table.
export function metricRows(result: { bindings: Readonly<Record<string, ValueJson>> }): MetricRow[] {
  const rows = Object.entries(result.bindings).map(([iri, v]) => ({
    iri,
    name: localName(iri),
    text: valueText(localName(iri), v),
    single: v.kind === "single",
  }));
  rows.sort((a, b) => Number(b.single) - Number(a.single) || (a.name < b.name ? -1 : 1));
  return rows.map(({ iri, name, text }) => ({ iri, name, text }));
}

export interface PlotView {
  readonly title: string;
  readonly inline?: string;
  readonly href?: string;
}

export function plotViews(plots: readonly PlotJson[]): PlotView[] {
  return plots.map((p) => ({
    title: `${p.kind} (${p.filename})`,
    ...(p.svg !== undefined ? { inline: p.svg } : {}),
    ...(p.url !== undefined ? { href: p.url } : {}),
  }));
}

export interface Highlight {
  readonly violation: ViolationJson;
  // null means the violation is about the pipeline individual itself, which
  // the UI shows on the pipeline header rather than a canvas node.
  readonly nodeId: NodeId | null;
}

// Every violation must land somewhere; focus IRIs that name no canvas
// element (the pipeline individual) map to null.
export function mapViolations(
  report: ReportJson,
  iriToNode: ReadonlyMap<string, NodeId>,
): Highlight[] {
  return report.violations.map((violation) => ({
    violation,
    nodeId: iriToNode.get(violation.focus_node) ?? null,
  }));
}

export interface RunView {
  readonly headline: string;
  readonly metrics: MetricRow[];
  readonly plots: PlotView[];
  readonly highlights: Highlight[];
  readonly failedNodeId: NodeId | null;
}

export function successView(run: RunResponseJson): RunView {
  return {
    headline: `run succeeded: ${run.result.status}`,
    metrics: metricRows(run.result),
    plots: plotViews(run.plots),
    highlights: [],
    failedNodeId: null,
  };
}

export function invalidView(report: ReportJson, iriToNode: ReadonlyMap<string, NodeId>): RunView {
  return {
    headline: `validation found ${report.violations.length} problem(s)`,
    metrics: [],
    plots: [],
    highlights: mapViolations(report, iriToNode),
    failedNodeId: null,
  };
}

export function failureView(
  failure: RunFailureJson,
  iriToNode: ReadonlyMap<string, NodeId>,
): RunView {
  const failedNodeId =
    failure.failed_task !== null ? iriToNode.get(failure.failed_task) ?? null : null;
  return {
    headline: `run failed: ${failure.error}`,
    metrics: failure.result ? metricRows(failure.result) : [],
    plots: [],
    highlights: [],
    failedNodeId,
  };
}
