import { Api } from "./api.js";
import { BatchSession, type BatchTile } from "./batch.js";
import { parseBinding, validateBinding, type SketchBinding } from "./binding.js";
import {
  buildControls,
  controlValues,
  setControlValues,
  type Control,
} from "./controls.js";
import { GalleryView, buildFilter } from "./gallery.js";
import { CanvasRenderer, loadSketch, renderToContext, type SketchHandle } from "./render.js";
import { AGENT_NAMES, type DrawingRecord, type SpecDoc } from "./types.js";

const $ = <T extends HTMLElement>(selector: string): T => {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
};

interface AppState {
  api: Api;
  spec: SpecDoc;
  binding: SketchBinding;
  sketch: SketchHandle;
  renderer: CanvasRenderer;
  controls: Control[];
  batch: BatchSession;
  gallery: GalleryView;
  activeAgent: string;
  manualDrawId: string | null;
}

let app: AppState;

async function init(): Promise<void> {
  const serverBase =
    new URLSearchParams(location.search).get("server") ?? "http://127.0.0.1:8000";
  $("#server-url").textContent = serverBase;
  const api = new Api(serverBase);

  const bindingDoc = await (await fetch("binding.json")).json();
  const binding = parseBinding(bindingDoc);
  const sketchSource = await (await fetch(binding.sketch)).text();
  const spec = await api.getSpec();
  validateBinding(binding, spec);
  const sketch = loadSketch(sketchSource, binding.entry);

  const workCanvas = document.createElement("canvas");
  const renderer = new CanvasRenderer(sketch, binding, workCanvas);

  app = {
    api,
    spec,
    binding,
    sketch,
    renderer,
    controls: buildControls(spec),
    batch: new BatchSession(api, renderer),
    gallery: new GalleryView(api),
    activeAgent: "gaussian",
    manualDrawId: null,
  };

  setupTabs();
  setupManualTab();
  setupAgentTab();
  setupGalleryTab();
  renderManualPreview();
}

function setupTabs(): void {
  for (const button of document.querySelectorAll<HTMLButtonElement>(".tab-button")) {
    button.addEventListener("click", () => {
      for (const other of document.querySelectorAll(".tab-button")) {
        other.classList.toggle("active", other === button);
      }
      for (const pane of document.querySelectorAll<HTMLElement>(".tab-pane")) {
        pane.hidden = pane.id !== `tab-${button.dataset.tab}`;
      }
      if (button.dataset.tab === "gallery") void refreshGallery();
    });
  }
}

// ----------------------------------------------------------------------
// Manual exploration

function setupManualTab(): void {
  const host = $("#manual-controls");
  host.replaceChildren();
  for (const control of app.controls) {
    const row = document.createElement("label");
    row.className = "control-row";
    const caption = document.createElement("span");
    caption.textContent = control.name;
    row.append(caption);
    if (control.kind === "dropdown") {
      const select = document.createElement("select");
      for (const option of control.options) {
        const el = document.createElement("option");
        el.value = option;
        el.textContent = option;
        select.append(el);
      }
      select.value = control.value;
      select.addEventListener("change", () => {
        control.value = select.value;
        renderManualPreview();
      });
      row.append(select);
    } else {
      const slider = document.createElement("input");
      slider.type = "range";
      slider.min = String(control.min);
      slider.max = String(control.max);
      slider.step = String(control.step);
      slider.value = String(control.value);
      const readout = document.createElement("output");
      readout.textContent = formatValue(control.value);
      slider.addEventListener("input", () => {
        control.value = Number(slider.value);
        readout.textContent = formatValue(control.value);
        renderManualPreview();
      });
      row.append(slider, readout);
    }
    row.dataset.control = control.name;
    host.append(row);
  }

  $("#manual-random").addEventListener("click", () => void randomizeControls());
  $("#manual-save").addEventListener("click", () => void saveManualDrawing());
}

function formatValue(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(3);
}

function syncManualWidgets(): void {
  for (const control of app.controls) {
    const row = document.querySelector(`[data-control="${control.name}"]`);
    if (!row) continue;
    const input = row.querySelector("input, select") as
      | HTMLInputElement
      | HTMLSelectElement;
    input.value = String(control.value);
    const readout = row.querySelector("output");
    if (readout && typeof control.value === "number") {
      readout.textContent = formatValue(control.value);
    }
  }
}

function renderManualPreview(): void {
  const canvas = $("#manual-canvas") as unknown as HTMLCanvasElement;
  canvas.width = app.binding.canvas.width;
  canvas.height = app.binding.canvas.height;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const seed = app.manualDrawId ?? "preview";
  renderToContext(app.sketch, app.binding, controlValues(app.controls), seed, ctx);
}

async function randomizeControls(): Promise<void> {
  const [proposal] = await app.api.play("random", 1);
  if (!proposal) return;
  setControlValues(app.controls, proposal.params);
  app.manualDrawId = proposal.draw_id;
  syncManualWidgets();
  renderManualPreview();
  const png = await app.renderer.render(proposal.params, proposal.draw_id);
  await app.api.uploadImage(proposal.draw_id, png);
  setStatus(`random draw ${proposal.draw_id} loaded`);
}

async function saveManualDrawing(): Promise<void> {
  const params = controlValues(app.controls);
  const scoreRaw = ($("#manual-score") as unknown as HTMLSelectElement).value;
  const { draw_id } = await app.api.saveDrawing(params);
  const png = await app.renderer.render(params, draw_id);
  await app.api.uploadImage(draw_id, png);
  if (scoreRaw !== "") {
    await app.api.feedback(draw_id, Number(scoreRaw));
  }
  app.manualDrawId = draw_id;
  renderManualPreview();
  setStatus(`saved drawing ${draw_id}${scoreRaw !== "" ? ` with score ${scoreRaw}` : ""}`);
}

// ----------------------------------------------------------------------
// Agent exploration

function setupAgentTab(): void {
  const picker = $("#agent-picker") as unknown as HTMLSelectElement;
  picker.replaceChildren();
  for (const name of AGENT_NAMES) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    picker.append(option);
  }
  picker.value = app.activeAgent;
  picker.addEventListener("change", () => {
    app.activeAgent = picker.value;
  });

  $("#agent-generate").addEventListener("click", () => void generateBatch());
  $("#agent-submit").addEventListener("click", () => void submitScores());
  $("#warp-back").addEventListener("click", () => void warp(-1));
  $("#warp-forward").addEventListener("click", () => void warp(1));
}

async function generateBatch(): Promise<void> {
  const count = Number(($("#agent-count") as unknown as HTMLInputElement).value) || 16;
  setStatus(`generating ${count} proposals with ${app.activeAgent}...`);
  const tiles = await app.batch.generate(app.activeAgent, count);
  const grid = $("#agent-grid");
  grid.replaceChildren(...tiles.map(buildTile));
  setStatus(`${tiles.length} drawings rendered and uploaded`);
}

function buildTile(tile: BatchTile): HTMLElement {
  const card = document.createElement("div");
  card.className = "tile";
  const img = document.createElement("img");
  img.src = URL.createObjectURL(new Blob([tile.png.slice().buffer], { type: "image/png" }));
  img.alt = tile.drawId;
  card.append(img);
  const scores = document.createElement("div");
  scores.className = "score-row";
  for (let value = 0; value <= 5; value++) {
    const button = document.createElement("button");
    button.textContent = String(value);
    button.addEventListener("click", () => {
      app.batch.setScore(tile.drawId, value);
      for (const sibling of scores.children) sibling.classList.remove("picked");
      button.classList.add("picked");
    });
    scores.append(button);
  }
  card.append(scores);
  return card;
}

async function submitScores(): Promise<void> {
  const sent = await app.batch.submitScores();
  for (const picked of document.querySelectorAll("#agent-grid .picked")) {
    picked.classList.remove("picked");
  }
  setStatus(`submitted ${sent} score(s) to ${app.activeAgent}`);
}

async function warp(steps: number): Promise<void> {
  await app.batch.timeWarp(app.activeAgent, steps);
  setStatus(`time warp ${steps > 0 ? "+" : ""}${steps} on ${app.activeAgent}`);
}

// ----------------------------------------------------------------------
// Gallery

function setupGalleryTab(): void {
  $("#gallery-refresh").addEventListener("click", () => void refreshGallery());
  $("#gallery-select-all").addEventListener("click", () => {
    app.gallery.selectAll();
    paintGallery();
  });
  $("#gallery-clear").addEventListener("click", () => {
    app.gallery.clearSelection();
    paintGallery();
  });
  $("#gallery-rate").addEventListener("click", () => void bulkRate());
  $("#gallery-delete").addEventListener("click", () => void bulkDelete());
}

function currentFilter() {
  return buildFilter({
    scoreMin: ($("#filter-score-min") as unknown as HTMLInputElement).value,
    scoreMax: ($("#filter-score-max") as unknown as HTMLInputElement).value,
    agent: ($("#filter-agent") as unknown as HTMLInputElement).value,
    unratedOnly: ($("#filter-unrated") as unknown as HTMLInputElement).checked,
    sort: ($("#filter-sort") as unknown as HTMLSelectElement).value,
    order: ($("#filter-order") as unknown as HTMLSelectElement).value,
  });
}

async function refreshGallery(): Promise<void> {
  await app.gallery.refresh(currentFilter());
  paintGallery();
}

function paintGallery(): void {
  const grid = $("#gallery-grid");
  grid.replaceChildren(...app.gallery.records.map(buildGalleryTile));
  $("#gallery-count").textContent = `${app.gallery.records.length} drawing(s)`;
}

function buildGalleryTile(record: DrawingRecord): HTMLElement {
  const card = document.createElement("div");
  card.className = "tile";
  // rendering is deterministic per draw id, so tiles are rebuilt locally
  const canvas = document.createElement("canvas");
  canvas.width = app.binding.canvas.width;
  canvas.height = app.binding.canvas.height;
  const ctx = canvas.getContext("2d");
  if (ctx) renderToContext(app.sketch, app.binding, record.params, record.id, ctx);
  card.append(canvas);

  const meta = document.createElement("div");
  meta.className = "tile-meta";
  meta.textContent = `${record.agent} · ${record.score ?? "unrated"}`;
  card.append(meta);

  const checkbox = document.createElement("input");
  checkbox.type = "checkbox";
  checkbox.checked = app.gallery.selected.has(record.id);
  checkbox.addEventListener("change", () => app.gallery.toggle(record.id));
  card.append(checkbox);
  return card;
}

async function bulkRate(): Promise<void> {
  const score = Number(($("#gallery-score") as unknown as HTMLSelectElement).value);
  const sent = await app.gallery.bulkRate(score);
  await refreshGallery();
  setStatus(`rated ${sent} drawing(s) at ${score}`);
}

async function bulkDelete(): Promise<void> {
  const removed = await app.gallery.bulkDelete();
  await refreshGallery();
  setStatus(`deleted ${removed} drawing(s)`);
}

function setStatus(text: string): void {
  $("#status").textContent = text;
}

init().catch((err) => {
  console.error(err);
  setStatus(`startup failed: ${err instanceof Error ? err.message : err}`);
});
