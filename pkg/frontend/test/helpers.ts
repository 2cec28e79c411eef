// Shared test scaffolding: fixture loading and a canvas replica of the
// classification demo pipeline that the service's own builder produces.

import { readFileSync } from "node:fs";

import { Catalog } from "../src/catalog.js";
import type { CatalogPayload } from "../src/catalog.js";
import type { NodeId, StudioSession, TaskNode } from "../src/model.js";
import {
  addDataEntityNode,
  addTaskNode,
  connectData,
  connectNext,
  newSession,
  parametersOf,
  setMethod,
  setParam,
} from "../src/model.js";
import { DS, ML, VISU } from "../src/turtle.js";

export function fixture(name: string): string {
  return readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");
}

export function loadCatalog(): Catalog {
  return new Catalog(JSON.parse(fixture("catalog.json")) as CatalogPayload);
}

export function setParamByName(
  session: StudioSession,
  methodId: NodeId,
  name: string,
  value: number | string | boolean | null,
): void {
  const param = parametersOf(session, methodId).find((p) => p.name === name);
  if (!param) throw new Error(`no parameter '${name}' on ${methodId}`);
  setParam(session, param.id, value);
}

export interface ReplicaNodes {
  session: StudioSession;
  splitting: TaskNode;
  classification: TaskNode;
  performance: TaskNode;
  canvas: TaskNode;
  scatter: TaskNode;
}

// Mirrors the service's classification demo: split, kNN, accuracy, canvas,
// scatter, over columns x/y/label of classification.csv.
export function buildClassificationReplica(catalog: Catalog): ReplicaNodes {
  const session = newSession("classdemo", "classification.csv");
  const x = addDataEntityNode(
    session,
    { name: "x", sourceColumn: "x", semantics: DS + "Numerical", structure: DS + "Vector" },
    { x: 40, y: 24 },
  );
  const y = addDataEntityNode(
    session,
    { name: "y", sourceColumn: "y", semantics: DS + "Numerical", structure: DS + "Vector" },
    { x: 230, y: 24 },
  );
  const label = addDataEntityNode(
    session,
    { name: "label", sourceColumn: "label", semantics: DS + "Categorical", structure: DS + "Vector" },
    { x: 420, y: 24 },
  );

  const splitting = addTaskNode(session, ML + "DataSplitting", { x: 40, y: 170 });
  const splitMethod = setMethod(session, catalog, splitting.id, ML + "TrainTestSplitMethod");
  setParamByName(session, splitMethod.id, "ratio", 0.75);
  setParamByName(session, splitMethod.id, "seed", 7);
  connectData(session, x.id, splitting.id);
  connectData(session, y.id, splitting.id);
  connectData(session, label.id, splitting.id);

  const classification = addTaskNode(session, ML + "Classification", { x: 290, y: 170 });
  setMethod(session, catalog, classification.id, ML + "KNNMethod");
  connectData(session, splitting.id, classification.id, "train_features");
  connectData(session, splitting.id, classification.id, "train_labels");
  connectData(session, splitting.id, classification.id, "test_features");

  const performance = addTaskNode(session, ML + "PerformanceCalculation", { x: 540, y: 170 });
  setMethod(session, catalog, performance.id, ML + "AccuracyMethod");
  connectData(session, classification.id, performance.id, "predictions");
  connectData(session, splitting.id, performance.id, "test_labels");

  const canvas = addTaskNode(session, VISU + "CanvasTask", { x: 790, y: 170 });
  const canvasMethod = setMethod(session, catalog, canvas.id, VISU + "CanvasMethod");
  setParamByName(session, canvasMethod.id, "name", "results");

  const scatter = addTaskNode(session, VISU + "ScatterPlot", { x: 1040, y: 170 });
  setMethod(session, catalog, scatter.id, VISU + "ScatterMethod");
  connectData(session, splitting.id, scatter.id, "test_features");

  connectNext(session, splitting.id, classification.id);
  connectNext(session, classification.id, performance.id);
  connectNext(session, performance.id, canvas.id);
  connectNext(session, canvas.id, scatter.id);

  return { session, splitting, classification, performance, canvas, scatter };
}
