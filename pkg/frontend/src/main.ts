// Workbench bootstrap: wires the panels to the service and keeps each panel
// tagged with the snapshot version it was rendered from.

import { ApiError, WorkbenchApi } from "./api.js";
import type { EditorPattern } from "./viewmodel.js";
import {
  buildHypothesisPayload,
  demotionRows,
  filterTriples,
  flattenProvenance,
  isStale,
  patternVariables,
  reliabilityDiff,
  verdictCard,
} from "./viewmodel.js";
import {
  el,
  renderDiff,
  renderProvenance,
  renderSources,
  renderStaleBanner,
  renderTriples,
  renderVerdict,
  replaceChildren,
} from "./render.js";

const api = new WorkbenchApi("");

interface PanelState {
  renderedVersion: number;
}

const panels: Record<string, PanelState> = {
  sources: { renderedVersion: 0 },
  triples: { renderedVersion: 0 },
};

const editorPatterns: EditorPattern[] = [
  { s: "?p", p: "graduates", o: "?d" },
  { s: "?d", p: "awardedIn", o: "1256" },
];
let currentVerdictId: string | null = null;

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function toast(message: string, isError = false): void {
  const box = byId("toast");
  box.textContent = message;
  box.className = isError ? "toast error" : "toast";
  box.hidden = false;
  setTimeout(() => {
    box.hidden = true;
  }, 4000);
}

async function guard<T>(work: () => Promise<T>): Promise<T | null> {
  try {
    return await work();
  } catch (error) {
    if (error instanceof ApiError) {
      toast(`${error.status}: ${error.message}`, true);
    } else {
      toast(String(error), true);
    }
    return null;
  }
}

async function refreshSources(): Promise<void> {
  const envelope = await guard(() => api.listSources());
  if (!envelope) return;
  panels.sources.renderedVersion = envelope.version;
  replaceChildren(byId("sources-table"), renderSources(envelope.data));
  updateStaleBanners();
}

async function refreshTriples(): Promise<void> {
  const kind = (byId("filter-kind") as HTMLSelectElement).value;
  const subject = (byId("filter-subject") as HTMLInputElement).value.trim();
  const minText = (byId("filter-certainty") as HTMLInputElement).value;
  const envelope = await guard(() => api.listTriples({ limit: 1000 }));
  if (!envelope) return;
  panels.triples.renderedVersion = envelope.version;
  const rows = filterTriples(envelope.data.triples, {
    kind: kind as "" | "mention" | "factoid" | "fact",
    subject: subject || undefined,
    minCertainty: minText === "" ? undefined : Number(minText),
  });
  replaceChildren(byId("triples-table"), renderTriples(rows, showProvenance));
  byId("triples-count").textContent =
    `${rows.length} of ${envelope.data.total} triples`;
  updateStaleBanners();
}

async function showProvenance(tripleId: string): Promise<void> {
  const envelope = await guard(() => api.provenance(tripleId));
  if (!envelope) return;
  replaceChildren(byId("provenance-view"),
                  renderProvenance(flattenProvenance(envelope.data)));
}

function renderEditor(): void {
  const host = byId("pattern-rows");
  host.textContent = "";
  editorPatterns.forEach((pattern, index) => {
    const row = el("div", "pattern-row");
    for (const field of ["s", "p", "o"] as const) {
      const input = el("input");
      input.value = pattern[field];
      input.placeholder = field === "p" ? "predicate" : `${field} or ?var`;
      input.addEventListener("input", () => {
        pattern[field] = input.value;
        renderChips();
      });
      row.appendChild(input);
    }
    const remove = el("button", "link", "remove");
    remove.addEventListener("click", () => {
      editorPatterns.splice(index, 1);
      renderEditor();
    });
    row.appendChild(remove);
    host.appendChild(row);
  });
  renderChips();
}

function renderChips(): void {
  const chips = byId("variable-chips");
  chips.textContent = "";
  for (const name of patternVariables(editorPatterns)) {
    chips.appendChild(el("span", "chip", name));
  }
}

async function runHypothesis(): Promise<void> {
  const theta = Number((byId("theta-slider") as HTMLInputElement).value);
  let payload;
  try {
    payload = buildHypothesisPayload(editorPatterns, theta);
  } catch (error) {
    toast(String(error), true);
    return;
  }
  const created = await guard(() => api.createHypothesis(payload));
  if (!created) return;
  const verdict = await guard(() => api.testHypothesis(created.data.id));
  if (!verdict) return;
  currentVerdictId = verdict.data.verdict_id;
  replaceChildren(byId("verdict-panel"),
                  renderVerdict(verdictCard(verdict.data), propagateCurrent));
}

async function propagateCurrent(): Promise<void> {
  if (!currentVerdictId) return;
  const result = await guard(() => api.propagate(currentVerdictId!));
  if (!result) return;
  replaceChildren(byId("diff-panel"),
                  renderDiff(reliabilityDiff(result.data), demotionRows(result.data)));
  await refreshSources();
  await refreshTriples();
}

async function runPhase(phase: "associate" | "establish"): Promise<void> {
  const result = await guard<{ version: number }>(() =>
    phase === "associate" ? api.associate() : api.establish());
  if (!result) return;
  toast(`${phase} done (version ${result.version})`);
  await refreshTriples();
}

function updateStaleBanners(): void {
  for (const [name, state] of Object.entries(panels)) {
    const banner = byId(`${name}-stale`);
    const stale = isStale(state.renderedVersion, api.latestVersion);
    replaceChildren(banner, renderStaleBanner(stale));
  }
}

function wire(): void {
  byId("refresh-sources").addEventListener("click", refreshSources);
  byId("refresh-triples").addEventListener("click", refreshTriples);
  byId("run-associate").addEventListener("click", () => runPhase("associate"));
  byId("run-establish").addEventListener("click", () => runPhase("establish"));
  byId("add-pattern").addEventListener("click", () => {
    editorPatterns.push({ s: "", p: "", o: "" });
    renderEditor();
  });
  byId("run-test").addEventListener("click", runHypothesis);
  const slider = byId("theta-slider") as HTMLInputElement;
  slider.addEventListener("input", () => {
    byId("theta-value").textContent = Number(slider.value).toFixed(2);
  });
  (["filter-kind", "filter-subject", "filter-certainty"] as const).forEach((id) => {
    byId(id).addEventListener("change", refreshTriples);
  });
}

async function start(): Promise<void> {
  wire();
  renderEditor();
  await refreshSources();
  await refreshTriples();
}

document.addEventListener("DOMContentLoaded", () => {
  void start();
});
