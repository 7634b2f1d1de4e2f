import { describe, expect, it, vi } from "vitest";

import {
  chipsToQuery,
  chipToTerm,
  formatWeight,
  renderConceptBuilder,
  type Chip,
  type ConceptBuilderState,
} from "../src/concepts";

function chip(partial: Partial<Chip>): Chip {
  return {
    label: "person",
    bank: "concept",
    weight: 1,
    negated: false,
    connective: "AND",
    ...partial,
  };
}

describe("chip query generation", () => {
  it("builds the documented example", () => {
    expect(
      chipsToQuery([chip({ weight: 2 }), chip({ label: "indoor", negated: true })]),
    ).toBe("person:2 AND (NOT indoor)");
  });

  it("routes object chips through the obj/ prefix", () => {
    expect(chipToTerm(chip({ label: "dog", bank: "object" }))).toBe("obj/dog");
    expect(chipToTerm(chip({ label: "dog", bank: "object", weight: 0.5, negated: true }))).toBe(
      "(NOT obj/dog:0.5)",
    );
  });

  it("quotes labels that are not bare words", () => {
    expect(chipToTerm(chip({ label: "traffic light" }))).toBe('"traffic light"');
    expect(chipToTerm(chip({ label: "traffic light", bank: "object" }))).toBe(
      '"obj/traffic light"',
    );
    expect(chipToTerm(chip({ label: "and" }))).toBe('"and"');
  });

  it("OR connectives join as typed", () => {
    expect(
      chipsToQuery([
        chip({}),
        chip({ label: "dog", bank: "object", connective: "OR" }),
        chip({ label: "car" }),
      ]),
    ).toBe("person OR obj/dog AND car");
  });

  it("weights format without trailing zeros", () => {
    expect(formatWeight(2)).toBe("2");
    expect(formatWeight(0.5)).toBe("0.5");
    expect(formatWeight(1.5)).toBe("1.5");
  });

  it("empty builder yields the empty string (concept omitted)", () => {
    expect(chipsToQuery([])).toBe("");
  });
});

describe("builder DOM", () => {
  function setup(state?: Partial<ConceptBuilderState>) {
    const host = document.createElement("div");
    document.body.appendChild(host);
    const full: ConceptBuilderState = {
      chips: [chip({ weight: 2 }), chip({ label: "indoor", negated: true })],
      freeText: "",
      mode: "chips",
      error: null,
      ...state,
    };
    const autocomplete = vi.fn().mockResolvedValue({ labels: ["person", "personal"] });
    renderConceptBuilder(host, full, { autocomplete, onChange: vi.fn() });
    return { host, state: full, autocomplete };
  }

  it("always displays the generated canonical string", () => {
    const { host } = setup();
    expect(host.querySelector(".query-preview")!.textContent).toBe(
      "person:2 AND (NOT indoor)",
    );
  });

  it("weight steppers regenerate the string", () => {
    const { host } = setup();
    const plus = host.querySelectorAll<HTMLElement>(".chip")[0].querySelectorAll("button")[2];
    expect(plus.textContent).toBe("+");
    plus.click();
    expect(host.querySelector(".query-preview")!.textContent).toBe(
      "person:2.5 AND (NOT indoor)",
    );
  });

  it("NOT toggle flips negation", () => {
    const { host } = setup();
    host.querySelectorAll<HTMLElement>(".chip-not")[1].click();
    expect(host.querySelector(".query-preview")!.textContent).toBe("person:2 AND indoor");
  });

  it("parse errors render with a caret at the offset", () => {
    const { host } = setup({
      mode: "free",
      freeText: "AND person",
      error: { message: "dangling operator 'AND'", offset: 0 },
    });
    const err = host.querySelector(".parse-error")!.textContent!;
    expect(err).toContain("at offset 0");
    expect(err.split("\n")[2]).toBe("^");
  });

  it("free mode uses the raw text verbatim", () => {
    const { host } = setup({ mode: "free", freeText: "obj/dog:3 OR cat" });
    expect(host.querySelector(".query-preview")!.textContent).toBe("obj/dog:3 OR cat");
  });
});
