// Client-side dataset sniffing for /recommend: read the header plus a few
// rows, type each column, and turn the service's suggestion into ghost
// nodes the user can accept or dismiss.

import type { RecommendRequest, RecommendationJson } from "./api.js";
import type { Catalog } from "./catalog.js";
import type { DatasetColumn, DatasetInfo, StudioSession } from "./model.js";
import { addTaskNode, setMethod } from "./model.js";

export const SAMPLE_ROWS = 20;

// Minimal CSV line reader: quoted fields may hold commas and doubled quotes.
function splitCsvLine(line: string): string[] {
  const fields: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      fields.push(field);
      field = "";
    } else {
      field += ch;
    }
  }
  fields.push(field);
  return fields;
}

function isNumericCell(cell: string): boolean {
  const trimmed = cell.trim();
  // Number("") is 0, so empty cells must not count as numeric evidence.
  return trimmed !== "" && Number.isFinite(Number(trimmed));
}

// Header plus up to SAMPLE_ROWS data rows; a column is numeric when every
// non-empty sampled cell parses as a finite number.
export function sniffDataset(filename: string, text: string): DatasetInfo {
  const lines = text.split(/\r\n|\n|\r/).filter((line) => line.length > 0);
  if (!lines.length) throw new Error("the dataset is empty");
  const header = splitCsvLine(lines[0]);
  const rows = lines.slice(1, 1 + SAMPLE_ROWS).map(splitCsvLine);
  const columns: DatasetColumn[] = header.map((name, i) => {
    const cells = rows.map((r) => r[i] ?? "").filter((c) => c.trim() !== "");
    const numeric = cells.length > 0 && cells.every(isNumericCell);
    return { name, type: numeric ? "numeric" : "string" };
  });
  return { filename, columns, sampledRows: rows.length, text };
}

export function recommendRequest(dataset: DatasetInfo, labelColumn?: string): RecommendRequest {
  return {
    columns: dataset.columns.map((c) => ({ name: c.name, type: c.type })),
    ...(labelColumn !== undefined ? { label_column: labelColumn } : {}),
  };
}

export interface GhostPreview {
  readonly taskNodeId: string;
  readonly methodNodeId: string;
  readonly reason: string;
}

// Renders a recommendation as ghost task and method nodes; accepting them is
// materializeGhosts, dismissing them is clearGhosts.
export function addGhostRecommendation(
  session: StudioSession,
  catalog: Catalog,
  recommendation: RecommendationJson,
): GhostPreview {
  const occupied = session.nodes.filter((n) => n.kind === "task").length;
  const task = addTaskNode(
    session,
    recommendation.task,
    { x: 40 + 250 * occupied, y: 170 },
    true,
  );
  const method = setMethod(session, catalog, task.id, recommendation.method);
  return { taskNodeId: task.id, methodNodeId: method.id, reason: recommendation.reason };
}
