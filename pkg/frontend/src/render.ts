// DOM builders for the workbench panels. Rendering only; the numbers and
// strings come pre-formatted from viewmodel.ts.

import type { SourceRow, TripleRow } from "./model.js";
import type {
  DemotionRow,
  DiffRow,
  TreeRow,
  VerdictCard,
} from "./viewmodel.js";
import { formatCertainty, formatReliability } from "./viewmodel.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function table(headers: string[]): { root: HTMLTableElement; body: HTMLTableSectionElement } {
  const root = el("table");
  const head = root.createTHead().insertRow();
  for (const h of headers) {
    const cell = document.createElement("th");
    cell.textContent = h;
    head.appendChild(cell);
  }
  return { root, body: root.createTBody() };
}

export function renderSources(rows: SourceRow[]): HTMLElement {
  const { root, body } = table(["id", "name", "category", "reliability"]);
  for (const s of rows) {
    const tr = body.insertRow();
    tr.insertCell().textContent = s.id;
    tr.insertCell().textContent = s.name;
    tr.insertCell().textContent = s.category;
    const cell = tr.insertCell();
    cell.textContent = formatReliability(s.reliability);
    cell.className = "num";
    tr.dataset.sourceId = s.id;
  }
  return root;
}

export function renderTriples(
  rows: TripleRow[],
  onExplain: (tripleId: string) => void,
): HTMLElement {
  const { root, body } = table(["id", "kind", "subject", "predicate", "object",
                                "certainty", ""]);
  for (const t of rows) {
    const tr = body.insertRow();
    tr.insertCell().textContent = t.id;
    const kind = tr.insertCell();
    kind.textContent = t.kind;
    kind.className = `kind kind-${t.kind}`;
    tr.insertCell().textContent = t.s;
    tr.insertCell().textContent = t.p;
    tr.insertCell().textContent = String(t.o);
    const cert = tr.insertCell();
    cert.textContent = formatCertainty(t.certainty);
    cert.className = "num";
    const actions = tr.insertCell();
    const button = el("button", "link", "provenance");
    button.addEventListener("click", () => onExplain(t.id));
    actions.appendChild(button);
  }
  return root;
}

export function renderProvenance(rows: TreeRow[]): HTMLElement {
  const list = el("div", "tree");
  for (const row of rows) {
    const line = el("div", `tree-row kind-${row.kind}`);
    line.style.paddingLeft = `${row.depth * 1.4}em`;
    line.appendChild(el("span", "kind", row.kind));
    line.appendChild(el("span", "", ` ${row.label} `));
    line.appendChild(el("span", "num", `@ ${row.certainty}`));
    if (row.source) {
      line.appendChild(el("span", "source", ` [source ${row.source}]`));
    }
    list.appendChild(line);
  }
  return list;
}

export function renderVerdict(
  card: VerdictCard,
  onPropagate: () => void,
): HTMLElement {
  const panel = el("div", `verdict verdict-${card.tone}`);
  panel.appendChild(el("h3", "verdict-headline", card.headline));
  panel.appendChild(el("div", "muted", `threshold ${card.theta}`));
  if (card.bindings.length) {
    const list = el("ul", "bindings");
    for (const binding of card.bindings) {
      list.appendChild(el("li", "", `${binding.text} (score ${binding.score})`));
    }
    panel.appendChild(list);
  }
  if (card.supporting.length) {
    panel.appendChild(el("div", "muted", `supporting: ${card.supporting.join(", ")}`));
  }
  if (card.contradicting.length) {
    panel.appendChild(el("div", "muted",
                         `contradicting: ${card.contradicting.join(", ")}`));
  }
  const button = el("button", "", card.tone === "infirmed"
    ? "Propagate (infirmed)" : "Propagate (confirmed)");
  button.disabled = !card.canPropagate;
  button.addEventListener("click", onPropagate);
  panel.appendChild(button);
  return panel;
}

export function renderDiff(rows: DiffRow[], demotions: DemotionRow[]): HTMLElement {
  const panel = el("div", "diff");
  panel.appendChild(el("h3", "", "Changes after propagation"));
  const { root, body } = table(["source", "before", "after", "delta"]);
  for (const row of rows) {
    const tr = body.insertRow();
    tr.insertCell().textContent = row.source;
    tr.insertCell().textContent = row.before;
    tr.insertCell().textContent = row.after;
    const delta = tr.insertCell();
    delta.textContent = row.delta;
    delta.className = `num delta-${row.direction}`;
  }
  panel.appendChild(root);
  if (demotions.length) {
    panel.appendChild(el("h4", "", "Demoted facts"));
    for (const d of demotions) {
      panel.appendChild(el("div", "demotion",
                           `${d.label}: ${d.before} -> ${d.after}`));
    }
  } else {
    panel.appendChild(el("div", "muted", "no facts demoted"));
  }
  return panel;
}

export function renderStaleBanner(visible: boolean): HTMLElement {
  const banner = el("div", "stale-banner",
                    "state has moved on - refresh to see the latest snapshot");
  banner.hidden = !visible;
  return banner;
}

export function replaceChildren(target: HTMLElement, ...nodes: HTMLElement[]): void {
  target.replaceChildren(...nodes);
}
