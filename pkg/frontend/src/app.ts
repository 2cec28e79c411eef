// DOM glue for the studio: palette, canvas, inspector widgets, and the
// calls into the pipeline service. All graph logic lives in the pure
// modules; this file only renders state and routes events.

import { fetchCatalog, postRecommend, postRun, postValidate } from "./api.js";
import type { RecommendationJson } from "./api.js";
import { Catalog, groupTasks, searchCatalog } from "./catalog.js";
import { chainOrder, exportSession } from "./export.js";
import type { ExportProblem } from "./export.js";
import { importTurtle } from "./importer.js";
import type {
  CanvasNode,
  DataEntityNode,
  NodeId,
  ParameterNode,
  StudioSession,
  TaskNode,
} from "./model.js";
import {
  addDataEntityNode,
  addTaskNode,
  clearGhosts,
  connectData,
  connectNext,
  findNode,
  materializeGhosts,
  methodOf,
  newSession,
  parametersOf,
  removeNode,
  setMethod,
  setParam,
  taskNodes,
} from "./model.js";
import { addGhostRecommendation, recommendRequest, sniffDataset } from "./recommend.js";
import type { RunView } from "./results.js";
import { failureView, invalidView, mapViolations, successView } from "./results.js";
import { XSD_BOOLEAN, XSD_DOUBLE, XSD_INTEGER, localName } from "./turtle.js";

type LinkIntent =
  | { kind: "data"; from: NodeId; fromOutput?: string }
  | { kind: "next"; from: NodeId };

interface AppState {
  catalog: Catalog | null;
  catalogError: string | null;
  session: StudioSession;
  linkIntent: LinkIntent | null;
  flashNodes: Set<NodeId>;
  runView: RunView | null;
  recommendation: RecommendationJson | null;
  busy: boolean;
  status: string;
}

const state: AppState = {
  catalog: null,
  catalogError: null,
  session: newSession(),
  linkIntent: null,
  flashNodes: new Set(),
  runView: null,
  recommendation: null,
  busy: false,
  status: "",
};

const el = {
  palette: document.getElementById("palette") as HTMLElement,
  search: document.getElementById("search") as HTMLInputElement,
  searchResults: document.getElementById("search-results") as HTMLElement,
  canvas: document.getElementById("canvas") as HTMLElement,
  edgeLayer: document.getElementById("edge-layer") as unknown as SVGSVGElement,
  nodeLayer: document.getElementById("node-layer") as HTMLElement,
  pipelineName: document.getElementById("pipeline-name") as HTMLInputElement,
  csvPath: document.getElementById("csv-path") as HTMLInputElement,
  seed: document.getElementById("seed") as HTMLInputElement,
  status: document.getElementById("status") as HTMLElement,
  problems: document.getElementById("problems") as HTMLElement,
  results: document.getElementById("results") as HTMLElement,
  turtleOut: document.getElementById("turtle-out") as HTMLTextAreaElement,
  turtleIn: document.getElementById("turtle-in") as HTMLTextAreaElement,
  datasetInfo: document.getElementById("dataset-info") as HTMLElement,
  labelColumn: document.getElementById("label-column") as HTMLSelectElement,
  recommendation: document.getElementById("recommendation") as HTMLElement,
  validateBtn: document.getElementById("validate-btn") as HTMLButtonElement,
  runBtn: document.getElementById("run-btn") as HTMLButtonElement,
};

function setStatus(text: string): void {
  state.status = text;
  el.status.textContent = text;
}

// -- palette ----------------------------------------------------------------

function freeSpot(): { x: number; y: number } {
  const count = taskNodes(state.session).length;
  return { x: 40 + 250 * (count % 4), y: 170 + 200 * Math.floor(count / 4) };
}

function renderPalette(): void {
  el.palette.replaceChildren();
  if (!state.catalog) {
    const note = document.createElement("p");
    note.className = "hint";
    note.textContent = state.catalogError ?? "loading catalog...";
    if (state.catalogError) {
      const retry = document.createElement("button");
      retry.textContent = "Retry";
      retry.addEventListener("click", () => void loadCatalog());
      note.append(" ", retry);
    }
    el.palette.append(note);
    return;
  }
  for (const group of groupTasks(state.catalog)) {
    if (!group.tasks.length) continue;
    const details = document.createElement("details");
    details.open = true;
    const summary = document.createElement("summary");
    summary.textContent = group.title;
    details.append(summary);
    for (const task of group.tasks) {
      const btn = document.createElement("button");
      btn.className = "palette-item";
      btn.textContent = task.label;
      btn.title = task.iri;
      btn.addEventListener("click", () => {
        addTaskNode(state.session, task.iri, freeSpot());
        render();
      });
      details.append(btn);
    }
    el.palette.append(details);
  }
  const entityBtn = document.createElement("button");
  entityBtn.className = "palette-item entity";
  entityBtn.textContent = "+ Data entity";
  entityBtn.addEventListener("click", () => {
    const defaults = state.catalog!.payload;
    addDataEntityNode(
      state.session,
      {
        name: `entity${state.session.nextId}`,
        sourceColumn: "",
        semantics: defaults.semantics[0]?.iri ?? "",
        structure: defaults.structures[0]?.iri ?? "",
      },
      { x: 40 + 190 * state.session.nodes.filter((n) => n.kind === "data-entity").length, y: 24 },
    );
    render();
  });
  el.palette.append(entityBtn);
}

function renderSearch(): void {
  el.searchResults.replaceChildren();
  if (!state.catalog) return;
  for (const entry of searchCatalog(state.catalog, el.search.value)) {
    const row = document.createElement("div");
    row.className = "search-hit";
    row.textContent = `${entry.label} (${entry.kind})`;
    row.title = entry.iri;
    el.searchResults.append(row);
  }
}

// -- canvas -----------------------------------------------------------------

function problemBadges(problems: readonly ExportProblem[], nodeId: NodeId): ExportProblem[] {
  return problems.filter((p) => p.nodeId === nodeId);
}

function nodeCard(node: CanvasNode, problems: readonly ExportProblem[]): HTMLElement {
  const card = document.createElement("div");
  card.className = `node ${node.kind}`;
  card.dataset.nodeId = node.id;
  card.style.left = `${node.position.x}px`;
  card.style.top = `${node.position.y}px`;
  if ("ghost" in node && node.ghost) card.classList.add("ghost");
  if (state.flashNodes.has(node.id)) card.classList.add("flash");
  const mine = problemBadges(problems, node.id);
  if (mine.length) {
    card.classList.add("broken");
    card.title = mine.map((p) => p.message).join("\n");
  }
  return card;
}

function header(card: HTMLElement, title: string, node: CanvasNode): HTMLElement {
  const head = document.createElement("div");
  head.className = "node-head";
  const label = document.createElement("span");
  label.textContent = title;
  head.append(label);
  const close = document.createElement("button");
  close.className = "close";
  close.textContent = "x";
  close.title = "remove";
  close.addEventListener("click", (ev) => {
    ev.stopPropagation();
    removeNode(state.session, node.id);
    render();
  });
  head.append(close);
  enableDrag(head, node);
  card.append(head);
  return head;
}

function enableDrag(handle: HTMLElement, node: CanvasNode): void {
  handle.addEventListener("pointerdown", (down) => {
    if ((down.target as HTMLElement).tagName === "BUTTON") return;
    down.preventDefault();
    const startX = down.clientX - node.position.x;
    const startY = down.clientY - node.position.y;
    const move = (ev: PointerEvent) => {
      node.position = { x: Math.max(0, ev.clientX - startX), y: Math.max(0, ev.clientY - startY) };
      render();
    };
    const up = () => {
      window.removeEventListener("pointermove", move);
      window.removeEventListener("pointerup", up);
    };
    window.addEventListener("pointermove", move);
    window.addEventListener("pointerup", up);
  });
}

function paramInput(param: ParameterNode): HTMLElement {
  const row = document.createElement("label");
  row.className = "param-row";
  row.dataset.nodeId = param.id;
  const caption = document.createElement("span");
  caption.textContent = param.name + (param.required ? " *" : "");
  row.append(caption);
  if (param.datatype === XSD_BOOLEAN) {
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = param.value === true;
    box.addEventListener("change", () => {
      setParam(state.session, param.id, box.checked);
      render();
    });
    row.append(box);
    return row;
  }
  const input = document.createElement("input");
  input.type = param.datatype === XSD_INTEGER || param.datatype === XSD_DOUBLE ? "number" : "text";
  if (param.datatype === XSD_DOUBLE) input.step = "any";
  input.value = param.value === null ? "" : String(param.value);
  input.addEventListener("change", () => {
    if (input.value === "") {
      setParam(state.session, param.id, null);
    } else if (param.datatype === XSD_INTEGER || param.datatype === XSD_DOUBLE) {
      setParam(state.session, param.id, Number(input.value));
    } else {
      setParam(state.session, param.id, input.value);
    }
    render();
  });
  row.append(input);
  return row;
}

function taskCard(task: TaskNode, problems: readonly ExportProblem[]): HTMLElement {
  const catalog = state.catalog!;
  const spec = catalog.task(task.classIri);
  const card = nodeCard(task, problems);
  header(card, spec?.label ?? localName(task.classIri), task);

  const methodSelect = document.createElement("select");
  const placeholder = document.createElement("option");
  placeholder.value = "";
  placeholder.textContent = "choose a method...";
  methodSelect.append(placeholder);
  const current = methodOf(state.session, task.id);
  for (const m of catalog.methodsOf(task.classIri)) {
    const option = document.createElement("option");
    option.value = m.iri;
    option.textContent = m.label;
    option.selected = current?.classIri === m.iri;
    methodSelect.append(option);
  }
  methodSelect.addEventListener("change", () => {
    if (methodSelect.value) setMethod(state.session, catalog, task.id, methodSelect.value);
    render();
  });
  card.append(methodSelect);

  if (current) {
    const params = parametersOf(state.session, current.id);
    if (params.length) {
      const box = document.createElement("div");
      box.className = "params";
      box.dataset.nodeId = current.id;
      for (const p of params) box.append(paramInput(p));
      card.append(box);
    }
  }

  const actions = document.createElement("div");
  actions.className = "node-actions";
  for (const out of spec?.outputs ?? []) {
    const btn = document.createElement("button");
    btn.textContent = `${out.name} >`;
    btn.title = `link output '${out.name}' to another task`;
    btn.addEventListener("click", () => {
      state.linkIntent = { kind: "data", from: task.id, fromOutput: out.name };
      setStatus(`click a task to receive '${out.name}'`);
      render();
    });
    actions.append(btn);
  }
  const chainBtn = document.createElement("button");
  chainBtn.textContent = "chain >";
  chainBtn.title = "link this task to the next one";
  chainBtn.addEventListener("click", () => {
    state.linkIntent = { kind: "next", from: task.id };
    setStatus("click the task that should run next");
    render();
  });
  actions.append(chainBtn);
  card.append(actions);

  card.addEventListener("click", () => {
    const intent = state.linkIntent;
    if (!intent || intent.from === task.id) return;
    if (intent.kind === "data") {
      connectData(state.session, intent.from, task.id, intent.fromOutput);
    } else {
      connectNext(state.session, intent.from, task.id);
    }
    state.linkIntent = null;
    setStatus("");
    render();
  });
  return card;
}

function entityCard(entity: DataEntityNode, problems: readonly ExportProblem[]): HTMLElement {
  const catalog = state.catalog!;
  const card = nodeCard(entity, problems);
  header(card, "Data entity", entity);

  const fields = document.createElement("div");
  fields.className = "entity-fields";
  const nameInput = document.createElement("input");
  nameInput.value = entity.name;
  nameInput.placeholder = "name";
  nameInput.addEventListener("change", () => {
    entity.name = nameInput.value;
    render();
  });
  const columnInput = document.createElement("input");
  columnInput.value = entity.sourceColumn;
  columnInput.placeholder = "CSV column";
  columnInput.addEventListener("change", () => {
    entity.sourceColumn = columnInput.value;
    render();
  });
  fields.append(nameInput, columnInput);

  const semantics = document.createElement("select");
  for (const s of catalog.payload.semantics) {
    const option = document.createElement("option");
    option.value = s.iri;
    option.textContent = s.label;
    option.selected = entity.semantics === s.iri;
    semantics.append(option);
  }
  semantics.addEventListener("change", () => {
    entity.semantics = semantics.value;
    render();
  });
  const structure = document.createElement("select");
  for (const s of catalog.payload.structures) {
    const option = document.createElement("option");
    option.value = s.iri;
    option.textContent = s.label;
    option.selected = entity.structure === s.iri;
    structure.append(option);
  }
  structure.addEventListener("change", () => {
    entity.structure = structure.value;
    render();
  });
  fields.append(semantics, structure);
  card.append(fields);

  const link = document.createElement("button");
  link.textContent = "link >";
  link.title = "feed this entity into a task";
  link.addEventListener("click", () => {
    state.linkIntent = { kind: "data", from: entity.id };
    setStatus(`click a task to receive '${entity.name}'`);
    render();
  });
  card.append(link);
  return card;
}

function edgePath(fromCard: HTMLElement, toCard: HTMLElement): string {
  const canvasBox = el.canvas.getBoundingClientRect();
  const a = fromCard.getBoundingClientRect();
  const b = toCard.getBoundingClientRect();
  const x1 = a.left + a.width / 2 - canvasBox.left + el.canvas.scrollLeft;
  const y1 = a.top + a.height - canvasBox.top + el.canvas.scrollTop;
  const x2 = b.left + b.width / 2 - canvasBox.left + el.canvas.scrollLeft;
  const y2 = b.top - canvasBox.top + el.canvas.scrollTop;
  const bend = Math.max(24, (y2 - y1) / 2);
  return `M ${x1} ${y1} C ${x1} ${y1 + bend}, ${x2} ${y2 - bend}, ${x2} ${y2}`;
}

function renderEdges(): void {
  el.edgeLayer.replaceChildren();
  const cardById = new Map<string, HTMLElement>();
  for (const card of el.nodeLayer.querySelectorAll<HTMLElement>(".node")) {
    if (card.dataset.nodeId) cardById.set(card.dataset.nodeId, card);
  }
  for (const edge of state.session.edges) {
    const from = cardById.get(edge.from);
    const to = cardById.get(edge.to);
    if (!from || !to) continue;
    const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
    path.setAttribute("d", edgePath(from, to));
    path.setAttribute("class", `edge ${edge.role}`);
    if (edge.fromOutput) {
      const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
      title.textContent = edge.fromOutput;
      path.append(title);
    }
    el.edgeLayer.append(path);
  }
}

function renderCanvas(): void {
  const problems = state.catalog ? collectProblems() : [];
  el.nodeLayer.replaceChildren();
  if (!state.catalog) return;
  for (const node of state.session.nodes) {
    if (node.kind === "task") el.nodeLayer.append(taskCard(node, problems));
    else if (node.kind === "data-entity") el.nodeLayer.append(entityCard(node, problems));
  }
  renderEdges();
  renderProblems(problems);
}

// -- problems and results ---------------------------------------------------

function collectProblems(): ExportProblem[] {
  const result = exportSession(state.session, state.catalog!);
  return result.ok ? [] : [...result.problems];
}

function renderProblems(problems: readonly ExportProblem[]): void {
  el.problems.replaceChildren();
  for (const p of problems) {
    const row = document.createElement("div");
    row.className = "problem";
    row.textContent = `${p.code}: ${p.message}`;
    if (p.nodeId) {
      row.classList.add("clickable");
      row.addEventListener("click", () => flash(p.nodeId!));
    }
    el.problems.append(row);
  }
}

function flash(nodeId: NodeId): void {
  state.flashNodes = new Set([nodeId]);
  render();
  window.setTimeout(() => {
    state.flashNodes.clear();
    render();
  }, 1200);
}

function renderResults(): void {
  el.results.replaceChildren();
  const view = state.runView;
  if (!view) return;
  const head = document.createElement("p");
  head.className = "headline";
  head.textContent = view.headline;
  el.results.append(head);

  if (view.metrics.length) {
    const table = document.createElement("table");
    for (const row of view.metrics) {
      const tr = document.createElement("tr");
      const name = document.createElement("td");
      name.textContent = row.name;
      const value = document.createElement("td");
      value.textContent = row.text;
      tr.append(name, value);
      table.append(tr);
    }
    el.results.append(table);
  }

  for (const plot of view.plots) {
    const box = document.createElement("figure");
    const caption = document.createElement("figcaption");
    caption.textContent = plot.title;
    box.append(caption);
    if (plot.inline !== undefined) {
      const holder = document.createElement("div");
      holder.className = "plot";
      holder.innerHTML = plot.inline;
      box.append(holder);
    } else if (plot.href !== undefined) {
      const a = document.createElement("a");
      a.href = plot.href;
      a.target = "_blank";
      a.textContent = "open plot";
      box.append(a);
    }
    el.results.append(box);
  }

  for (const h of view.highlights) {
    const row = document.createElement("div");
    row.className = "violation clickable";
    row.textContent = `${h.violation.kind}: ${h.violation.message}`;
    row.addEventListener("click", () => {
      if (h.nodeId) flash(h.nodeId);
      else el.pipelineName.classList.add("flash");
    });
    el.results.append(row);
  }
}

// -- service calls ----------------------------------------------------------

async function loadCatalog(): Promise<void> {
  const result = await fetchCatalog("");
  if (result.ok) {
    state.catalog = new Catalog(result.value);
    state.catalogError = null;
  } else {
    state.catalog = null;
    state.catalogError = `catalog unavailable: ${result.error.message}`;
  }
  render();
}

function exportNow(): ReturnType<typeof exportSession> | null {
  if (!state.catalog) return null;
  const result = exportSession(state.session, state.catalog);
  el.turtleOut.value = result.ok ? result.turtle : "";
  if (!result.ok) setStatus("fix the flagged problems before exporting");
  return result;
}

async function validateNow(): Promise<void> {
  const exported = exportNow();
  if (!exported || !exported.ok) {
    render();
    return;
  }
  state.busy = true;
  render();
  const report = await postValidate("", exported.turtle);
  state.busy = false;
  if (!report.ok) {
    setStatus(`validation call failed: ${report.error.message}`);
  } else {
    state.session.lastValidation = report.value;
    state.runView = invalidView(report.value, exported.iriToNode);
    if (report.value.conforms) {
      state.runView = { ...state.runView, headline: "the pipeline is valid" };
      setStatus("");
    }
  }
  render();
}

async function runNow(): Promise<void> {
  const exported = exportNow();
  if (!exported || !exported.ok) {
    render();
    return;
  }
  state.busy = true;
  render();
  const seedText = el.seed.value.trim();
  const outcome = await postRun("", {
    turtle: exported.turtle,
    ...(state.session.dataset ? { dataset_csv: state.session.dataset.text } : {}),
    ...(seedText !== "" ? { seed: Number(seedText) } : {}),
  });
  state.busy = false;
  if (outcome.status === "success") {
    state.session.lastRun = outcome.run;
    state.runView = successView(outcome.run);
    setStatus("");
  } else if (outcome.status === "invalid") {
    state.runView = invalidView(outcome.report, exported.iriToNode);
    for (const h of mapViolations(outcome.report, exported.iriToNode)) {
      if (h.nodeId) state.flashNodes.add(h.nodeId);
    }
  } else if (outcome.status === "failed") {
    state.runView = failureView(outcome.failure, exported.iriToNode);
    if (state.runView.failedNodeId) state.flashNodes.add(state.runView.failedNodeId);
  } else {
    setStatus(`run call failed: ${outcome.error.message}`);
  }
  render();
}

async function recommendNow(): Promise<void> {
  if (!state.session.dataset) {
    setStatus("load a dataset first");
    return;
  }
  const label = el.labelColumn.value || undefined;
  const result = await postRecommend("", recommendRequest(state.session.dataset, label));
  if (!result.ok) {
    setStatus(`recommendation failed: ${result.error.message}`);
    return;
  }
  clearGhosts(state.session);
  state.recommendation = result.value;
  addGhostRecommendation(state.session, state.catalog!, result.value);
  render();
}

function renderRecommendation(): void {
  el.recommendation.replaceChildren();
  const rec = state.recommendation;
  if (!rec) return;
  const text = document.createElement("p");
  text.textContent = rec.reason;
  const accept = document.createElement("button");
  accept.textContent = "Accept";
  accept.addEventListener("click", () => {
    materializeGhosts(state.session);
    state.recommendation = null;
    render();
  });
  const dismiss = document.createElement("button");
  dismiss.textContent = "Dismiss";
  dismiss.addEventListener("click", () => {
    clearGhosts(state.session);
    state.recommendation = null;
    render();
  });
  el.recommendation.append(text, accept, dismiss);
}

function renderDataset(): void {
  const dataset = state.session.dataset;
  el.datasetInfo.textContent = dataset
    ? `${dataset.filename}: ${dataset.columns.map((c) => `${c.name} (${c.type})`).join(", ")}`
    : "no dataset loaded";
  const previous = el.labelColumn.value;
  el.labelColumn.replaceChildren();
  const none = document.createElement("option");
  none.value = "";
  none.textContent = "no label column";
  el.labelColumn.append(none);
  for (const c of dataset?.columns ?? []) {
    const option = document.createElement("option");
    option.value = c.name;
    option.textContent = c.name;
    option.selected = c.name === previous;
    el.labelColumn.append(option);
  }
}

// -- top level --------------------------------------------------------------

function render(): void {
  el.pipelineName.value = state.session.pipelineName;
  el.csvPath.value = state.session.csvPath;
  el.validateBtn.disabled = state.busy || !state.catalog;
  el.runBtn.disabled = state.busy || !state.catalog;
  renderPalette();
  renderSearch();
  renderCanvas();
  renderResults();
  renderRecommendation();
  renderDataset();
  el.status.textContent = state.status;
}

function wireStaticHandlers(): void {
  el.pipelineName.addEventListener("change", () => {
    state.session.pipelineName = el.pipelineName.value;
    render();
  });
  el.csvPath.addEventListener("change", () => {
    state.session.csvPath = el.csvPath.value;
    render();
  });
  el.search.addEventListener("input", renderSearch);
  el.validateBtn.addEventListener("click", () => void validateNow());
  el.runBtn.addEventListener("click", () => void runNow());
  document.getElementById("export-btn")!.addEventListener("click", () => {
    exportNow();
    render();
  });
  document.getElementById("import-btn")!.addEventListener("click", () => {
    if (!state.catalog) return;
    try {
      state.session = importTurtle(el.turtleIn.value, state.catalog);
      state.runView = null;
      setStatus("pipeline imported");
    } catch (exc) {
      setStatus(exc instanceof Error ? exc.message : String(exc));
    }
    render();
  });
  document.getElementById("clear-btn")!.addEventListener("click", () => {
    state.session = newSession(state.session.pipelineName, state.session.csvPath);
    state.runView = null;
    render();
  });
  document.getElementById("recommend-btn")!.addEventListener("click", () => void recommendNow());
  const fileInput = document.getElementById("dataset-file") as HTMLInputElement;
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      try {
        state.session.dataset = sniffDataset(file.name, text);
        state.session.csvPath = file.name;
        setStatus("");
      } catch (exc) {
        setStatus(exc instanceof Error ? exc.message : String(exc));
      }
      render();
    });
  });
  window.addEventListener("resize", renderEdges);
}

export function start(): void {
  wireStaticHandlers();
  render();
  void loadCatalog();
}

start();
