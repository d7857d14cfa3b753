// Payload shapes of the fusion service. Every response arrives wrapped in a
// version envelope; the version identifies the state snapshot it was
// computed against.

export interface Envelope<T> {
  version: number;
  data: T;
}

export type TripleKind = "mention" | "factoid" | "fact";
export type ObjectValue = string | number;

export interface SourceRow {
  id: string;
  name: string;
  reliability: number;
  category: string;
}

export interface TripleRow {
  id: string;
  kind: TripleKind;
  s: string;
  p: string;
  o: ObjectValue;
  certainty: number;
  provenance: string[];
  source?: string;
}

export interface TriplePage {
  total: number;
  triples: TripleRow[];
}

export interface ProvenanceNode {
  triple_id: string;
  kind: TripleKind;
  subject: string;
  predicate: string;
  object: ObjectValue;
  certainty: number;
  source: string | null;
  children: ProvenanceNode[];
}

export interface PatternRow {
  s: ObjectValue;
  p: string;
  o: ObjectValue;
}

export interface HypothesisCreated {
  id: string;
  theta: number;
  status: string;
  patterns: PatternRow[];
}

export interface BindingRow {
  assignments: Record<string, ObjectValue>;
  score: number;
  triples: string[];
}

export interface Verdict {
  verdict_id: string;
  hypothesis_id: string;
  status: "confirmed" | "infirmed" | "undetermined";
  score: number | null;
  theta: number;
  bindings: BindingRow[];
  supporting: string[];
  contradicting: string[];
  propagated: boolean;
}

export interface ReliabilityChange {
  source: string;
  before: number;
  after: number;
  delta: number;
}

export interface DemotedFact {
  triple: string;
  subject: string;
  predicate: string;
  object: ObjectValue;
  certainty_before: number;
  certainty_after: number | null;
}

export interface PropagationResult {
  verdict_id: string;
  direction: "confirmed" | "infirmed";
  reliability_changes: ReliabilityChange[];
  demoted_facts: DemotedFact[];
}

export interface AuditEntry {
  seq: number;
  action: string;
  details: Record<string, unknown>;
}

export interface AuditPage {
  total: number;
  entries: AuditEntry[];
}

export interface AssociateResult {
  new_factoids: string[];
  revised: string[];
  merges: Record<string, string>;
  iterations: number;
}

export interface EstablishResult {
  promoted: string[];
  demoted: string[];
  facts: TripleRow[];
}
