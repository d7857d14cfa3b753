// Acceptance: the hypothesis workflow on the reference fixture, end to end
// through the captured service responses, plus the no-arithmetic guarantee.

import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import type { Envelope, PropagationResult, Verdict } from "../src/model.js";
import { reliabilityDiff, verdictCard } from "../src/viewmodel.js";
import fixtures from "./fixtures.json";

describe("workbench acceptance", () => {
  it("hypothesis workflow displays 'confirmed, 0.98' on the reference fixture", () => {
    const verdict = (fixtures.verdict as Envelope<Verdict>).data;
    const card = verdictCard(verdict);
    expect(card.headline).toBe("confirmed, 0.98");
    expect(card.canPropagate).toBe(true);
    console.log("ACCEPTANCE 9a PASS - verdict card renders 'confirmed, 0.98'");
  });

  it("propagation renders a +0.01 reliability diff on source S3", () => {
    const propagation = (fixtures.propagation as Envelope<PropagationResult>).data;
    const s3 = reliabilityDiff(propagation).find((r) => r.source === "S3");
    expect(s3?.delta).toBe("+0.01");
    console.log("ACCEPTANCE 9b PASS - diff panel shows S3 +0.01");
  });

  it("client sources carry no aggregation arithmetic", () => {
    const src = join(__dirname, "..", "src");
    const text = readdirSync(src)
      .filter((f) => f.endsWith(".ts"))
      .map((f) => readFileSync(join(src, f), "utf-8"))
      .join("\n");
    expect(/noisy/i.test(text)).toBe(false);
    expect(/\(\s*1\s*-\s*\w/.test(text)).toBe(false);
    expect(/\b(certainty|reliability|score)\s*[-+*/]/.test(text)).toBe(false);
    console.log("ACCEPTANCE 9c PASS - static check found no fusion arithmetic");
  });
});
