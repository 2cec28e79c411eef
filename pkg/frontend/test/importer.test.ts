import { describe, expect, it } from "vitest";

import { exportSession } from "../src/export.js";
import { ImportError, importTurtle } from "../src/importer.js";
import { methodOf, parametersOf, taskNodes } from "../src/model.js";
import { DS, ML } from "../src/turtle.js";
import { fixture, loadCatalog } from "./helpers.js";

const catalog = loadCatalog();

describe("importTurtle", () => {
  it("round-trips the service document byte for byte", () => {
    const golden = fixture("classdemo.ttl");
    const session = importTurtle(golden, catalog);
    const result = exportSession(session, catalog);
    expect(result.ok).toBe(true);
    if (result.ok) expect(result.turtle).toBe(golden);
  });

  it("recovers the pipeline identity and dataset path", () => {
    const session = importTurtle(fixture("classdemo.ttl"), catalog);
    expect(session.pipelineName).toBe("classdemo");
    expect(session.csvPath).toBe("classification.csv");
  });

  it("rebuilds tasks in chain order with their methods and parameters", () => {
    const session = importTurtle(fixture("classdemo.ttl"), catalog);
    const tasks = taskNodes(session);
    expect(tasks.map((t) => t.classIri)).toEqual([
      ML + "DataSplitting",
      ML + "Classification",
      ML + "PerformanceCalculation",
      "https://kgflow.dev/schema/visu#CanvasTask",
      "https://kgflow.dev/schema/visu#ScatterPlot",
    ]);
    const splitMethod = methodOf(session, tasks[0].id)!;
    expect(splitMethod.classIri).toBe(ML + "TrainTestSplitMethod");
    const values = Object.fromEntries(
      parametersOf(session, splitMethod.id).map((p) => [p.name, p.value]),
    );
    expect(values).toEqual({ ratio: 0.75, seed: 7 });
  });

  it("rebuilds dataflow edges, including task-output sources", () => {
    const session = importTurtle(fixture("classdemo.ttl"), catalog);
    const tasks = taskNodes(session);
    const intoClassification = session.edges.filter(
      (e) => e.role === "dataflow" && e.to === tasks[1].id,
    );
    expect(intoClassification.map((e) => e.fromOutput)).toEqual([
      "train_features",
      "train_labels",
      "test_features",
    ]);
    expect(intoClassification.every((e) => e.from === tasks[0].id)).toBe(true);
    const entityEdges = session.edges.filter(
      (e) => e.role === "dataflow" && e.to === tasks[0].id,
    );
    expect(entityEdges).toHaveLength(3);
  });

  it("rejects documents without exactly one pipeline", () => {
    expect(() => importTurtle("", catalog)).toThrowError(ImportError);
    const doubled =
      fixture("classdemo.ttl") +
      `<https://kgflow.dev/pipeline/classdemo#Pipeline2> a <${DS}Pipeline> .\n`;
    expect(() => importTurtle(doubled, catalog)).toThrowError(/exactly one pipeline/);
  });

  it("rejects inputs that are neither entities nor outputs", () => {
    const broken =
      fixture("classdemo.ttl") +
      `<https://kgflow.dev/pipeline/classdemo#DataSplitting1> <${DS}hasInput4> <https://kgflow.dev/pipeline/classdemo#nowhere> .\n`;
    expect(() => importTurtle(broken, catalog)).toThrowError(/neither a declared entity nor a task output/);
  });

  it("surfaces turtle syntax errors", () => {
    expect(() => importTurtle("not turtle at all", catalog)).toThrowError(/line 1/);
  });
});
