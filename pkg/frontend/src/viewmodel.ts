// Pure presentation logic. Everything here turns API payloads into render
// models; no fusion arithmetic happens in the client - certainties,
// reliabilities and deltas are displayed exactly as the service reports
// them, only formatted.

import type {
  DemotedFact,
  ObjectValue,
  PatternRow,
  PropagationResult,
  ProvenanceNode,
  TripleRow,
  Verdict,
} from "./model.js";

// -- formatting -------------------------------------------------------------

/** Two-decimal display used for certainties and scores (0.582 -> "0.58"). */
export function formatCertainty(value: number): string {
  return value.toFixed(2);
}

/** Four-decimal display used for reliabilities (0.9 -> "0.9000"). */
export function formatReliability(value: number): string {
  return value.toFixed(4);
}

/** Signed, trailing-zero-trimmed delta ("+0.01", "-0.095", "0"). */
export function formatDelta(value: number): string {
  const rounded = Number(value.toFixed(4));
  if (rounded === 0) return "0";
  const sign = rounded > 0 ? "+" : "-";
  return sign + String(Math.abs(rounded));
}

export function tripleLabel(t: {
  subject?: string;
  predicate?: string;
  object?: ObjectValue;
  s?: string;
  p?: string;
  o?: ObjectValue;
}): string {
  const s = t.subject ?? t.s;
  const p = t.predicate ?? t.p;
  const o = t.object ?? t.o;
  return `(${s}, ${p}, ${o})`;
}

// -- verdict panel ------------------------------------------------------------

export interface VerdictCard {
  headline: string;
  tone: "confirmed" | "infirmed" | "undetermined";
  theta: string;
  bindings: Array<{ text: string; score: string; triples: string[] }>;
  supporting: string[];
  contradicting: string[];
  canPropagate: boolean;
}

export function verdictCard(verdict: Verdict): VerdictCard {
  const headline =
    verdict.score !== null
      ? `${verdict.status}, ${formatCertainty(verdict.score)}`
      : verdict.status;
  return {
    headline,
    tone: verdict.status,
    theta: formatCertainty(verdict.theta),
    bindings: verdict.bindings.map((b) => ({
      text: Object.entries(b.assignments)
        .map(([variable, value]) => `${variable} = ${value}`)
        .sort()
        .join(", "),
      score: formatCertainty(b.score),
      triples: b.triples,
    })),
    supporting: verdict.supporting,
    contradicting: verdict.contradicting,
    canPropagate:
      !verdict.propagated && verdict.status !== "undetermined",
  };
}

// -- diff panel ---------------------------------------------------------------

export interface DiffRow {
  source: string;
  before: string;
  after: string;
  delta: string;
  direction: "up" | "down";
}

export function reliabilityDiff(result: PropagationResult): DiffRow[] {
  return result.reliability_changes.map((change) => ({
    source: change.source,
    before: formatReliability(change.before),
    after: formatReliability(change.after),
    delta: formatDelta(change.delta),
    direction: change.delta >= 0 ? "up" : "down",
  }));
}

export interface DemotionRow {
  label: string;
  before: string;
  after: string;
}

export function demotionRows(result: PropagationResult): DemotionRow[] {
  return result.demoted_facts.map((fact: DemotedFact) => ({
    label: tripleLabel(fact),
    before: formatCertainty(fact.certainty_before),
    after: fact.certainty_after === null ? "gone" : formatCertainty(fact.certainty_after),
  }));
}

// -- triple table -------------------------------------------------------------

export interface TripleFilter {
  kind?: "mention" | "factoid" | "fact" | "";
  subject?: string;
  minCertainty?: number;
}

export function filterTriples(rows: TripleRow[], filter: TripleFilter): TripleRow[] {
  return rows.filter((t) => {
    if (filter.kind && t.kind !== filter.kind) return false;
    if (filter.subject && t.s !== filter.subject) return false;
    if (filter.minCertainty !== undefined && t.certainty < filter.minCertainty) {
      return false;
    }
    return true;
  });
}

// -- provenance tree ----------------------------------------------------------

export interface TreeRow {
  depth: number;
  id: string;
  kind: string;
  label: string;
  certainty: string;
  source: string | null;
}

export function flattenProvenance(node: ProvenanceNode, depth = 0): TreeRow[] {
  const row: TreeRow = {
    depth,
    id: node.triple_id,
    kind: node.kind,
    label: tripleLabel(node),
    certainty: formatCertainty(node.certainty),
    source: node.source,
  };
  const rows = [row];
  for (const child of node.children) {
    rows.push(...flattenProvenance(child, depth + 1));
  }
  return rows;
}

export function countLeaves(node: ProvenanceNode): number {
  if (node.children.length === 0) return 1;
  let total = 0;
  for (const child of node.children) total += countLeaves(child);
  return total;
}

// -- hypothesis editor ----------------------------------------------------------

export interface EditorPattern {
  s: string;
  p: string;
  o: string;
}

export function isVariable(term: string): boolean {
  return term.startsWith("?");
}

/** All variable names used across the editor's pattern rows, in first-use order. */
export function patternVariables(patterns: EditorPattern[]): string[] {
  const seen: string[] = [];
  for (const pattern of patterns) {
    for (const term of [pattern.s, pattern.o]) {
      if (isVariable(term) && !seen.includes(term)) seen.push(term);
    }
  }
  return seen;
}

function coerceTerm(term: string): ObjectValue {
  const trimmed = term.trim();
  if (!isVariable(trimmed) && /^-?\d+$/.test(trimmed)) return parseInt(trimmed, 10);
  return trimmed;
}

/** The exact JSON body the service (and the CLI) accept for a hypothesis. */
export function buildHypothesisPayload(
  patterns: EditorPattern[],
  theta: number,
): { theta: number; patterns: PatternRow[] } {
  const rows = patterns
    .filter((p) => p.s.trim() && p.p.trim() && p.o.trim())
    .map((p) => ({ s: coerceTerm(p.s), p: p.p.trim(), o: coerceTerm(p.o) }));
  if (rows.length === 0) {
    throw new Error("a hypothesis needs at least one complete pattern row");
  }
  return { theta, patterns: rows };
}

// -- staleness ------------------------------------------------------------------

/** A view is stale when the state moved past the snapshot it was rendered from. */
export function isStale(renderedVersion: number, latestVersion: number): boolean {
  return latestVersion > renderedVersion;
}
