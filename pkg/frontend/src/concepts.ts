// Concept query builder: chips with weight steppers and AND/OR/NOT
// controls, always displaying the generated canonical query string, plus
// a free-text mode that surfaces the service's parse errors at their
// character offsets.

export interface Chip {
  label: string;
  bank: "concept" | "object";
  weight: number;
  negated: boolean;
  connective: "AND" | "OR"; // joins this chip to the previous one
}

const KEYWORDS = new Set(["AND", "OR", "NOT"]);
const BARE = /^[A-Za-z0-9_.-]+$/;

export function formatWeight(w: number): string {
  // steppers produce halves; String() keeps "2" and "0.5" as typed
  return String(w);
}

function renderLabel(chip: Chip): string {
  let content = chip.label;
  if (chip.bank === "object") content = `obj/${content}`;
  const bare = BARE.test(chip.label) && !KEYWORDS.has(content.toUpperCase());
  return bare ? content : `"${content}"`;
}

export function chipToTerm(chip: Chip): string {
  let term = renderLabel(chip);
  if (chip.weight !== 1) term += `:${formatWeight(chip.weight)}`;
  if (chip.negated) term = `(NOT ${term})`;
  return term;
}

// [person(w2)] AND [NOT indoor]  ->  "person:2 AND (NOT indoor)"
export function chipsToQuery(chips: Chip[]): string {
  return chips
    .map((chip, i) => (i === 0 ? chipToTerm(chip) : ` ${chip.connective} ${chipToTerm(chip)}`))
    .join("");
}

export interface ConceptBuilderState {
  chips: Chip[];
  freeText: string;
  mode: "chips" | "free";
  error: { message: string; offset: number } | null;
}

export function currentQuery(state: ConceptBuilderState): string {
  return state.mode === "free" ? state.freeText : chipsToQuery(state.chips);
}

export type AutocompleteFn = (prefix: string, bank: string) => Promise<{ labels: string[] }>;

interface BuilderHandlers {
  autocomplete: AutocompleteFn;
  onChange: () => void;
}

export function renderConceptBuilder(
  container: HTMLElement,
  state: ConceptBuilderState,
  handlers: BuilderHandlers,
): void {
  container.innerHTML = "";
  container.classList.add("concept-builder");

  const modeRow = document.createElement("div");
  modeRow.className = "builder-mode";
  for (const mode of ["chips", "free"] as const) {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.textContent = mode === "chips" ? "builder" : "raw query";
    btn.className = state.mode === mode ? "mode-btn active" : "mode-btn";
    btn.addEventListener("click", () => {
      state.mode = mode;
      renderConceptBuilder(container, state, handlers);
      handlers.onChange();
    });
    modeRow.appendChild(btn);
  }
  container.appendChild(modeRow);

  if (state.mode === "chips") {
    renderChips(container, state, handlers);
  } else {
    renderFreeText(container, state, handlers);
  }

  const preview = document.createElement("code");
  preview.className = "query-preview";
  preview.textContent = currentQuery(state) || "(no concept query)";
  container.appendChild(preview);

  if (state.error) {
    const err = document.createElement("div");
    err.className = "parse-error";
    const query = currentQuery(state);
    const caret = " ".repeat(Math.min(state.error.offset, query.length)) + "^";
    err.textContent = `${state.error.message} at offset ${state.error.offset}\n${query}\n${caret}`;
    container.appendChild(err);
  }
}

function renderChips(
  container: HTMLElement,
  state: ConceptBuilderState,
  handlers: BuilderHandlers,
): void {
  const row = document.createElement("div");
  row.className = "chips-row";

  state.chips.forEach((chip, i) => {
    if (i > 0) {
      const conn = document.createElement("button");
      conn.type = "button";
      conn.className = "chip-connective";
      conn.textContent = chip.connective;
      conn.addEventListener("click", () => {
        chip.connective = chip.connective === "AND" ? "OR" : "AND";
        renderConceptBuilder(container, state, handlers);
        handlers.onChange();
      });
      row.appendChild(conn);
    }
    row.appendChild(renderChip(chip, i, container, state, handlers));
  });

  const input = document.createElement("input");
  input.className = "chip-input";
  input.placeholder = "add concept (obj/ for objects)";
  input.setAttribute("list", "concept-suggestions");
  let datalist = container.ownerDocument.getElementById("concept-suggestions");
  if (!datalist) {
    datalist = container.ownerDocument.createElement("datalist");
    datalist.id = "concept-suggestions";
    container.ownerDocument.body.appendChild(datalist);
  }
  input.addEventListener("input", () => {
    const raw = input.value.trim();
    const bank = raw.toLowerCase().startsWith("obj/") ? "object" : "concept";
    const prefix = bank === "object" ? raw.slice(4) : raw;
    void handlers.autocomplete(prefix, bank).then((doc) => {
      datalist!.innerHTML = "";
      for (const label of doc.labels) {
        const opt = container.ownerDocument.createElement("option");
        opt.value = bank === "object" ? `obj/${label}` : label;
        datalist!.appendChild(opt);
      }
    });
  });
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter" && input.value.trim()) {
      const raw = input.value.trim();
      const bank = raw.toLowerCase().startsWith("obj/") ? "object" : "concept";
      state.chips.push({
        label: bank === "object" ? raw.slice(4) : raw,
        bank,
        weight: 1,
        negated: false,
        connective: "AND",
      });
      state.error = null;
      renderConceptBuilder(container, state, handlers);
      handlers.onChange();
    }
  });
  row.appendChild(input);
  container.appendChild(row);
}

function renderChip(
  chip: Chip,
  index: number,
  container: HTMLElement,
  state: ConceptBuilderState,
  handlers: BuilderHandlers,
): HTMLElement {
  const el = document.createElement("span");
  el.className = chip.negated ? "chip negated" : "chip";

  const not = document.createElement("button");
  not.type = "button";
  not.className = "chip-not";
  not.textContent = "NOT";
  not.addEventListener("click", () => {
    chip.negated = !chip.negated;
    renderConceptBuilder(container, state, handlers);
    handlers.onChange();
  });
  el.appendChild(not);

  const label = document.createElement("span");
  label.className = "chip-label";
  label.textContent = chip.bank === "object" ? `obj/${chip.label}` : chip.label;
  el.appendChild(label);

  const weight = document.createElement("span");
  weight.className = "chip-weight";
  weight.textContent = `:${formatWeight(chip.weight)}`;
  el.appendChild(weight);

  const minus = document.createElement("button");
  minus.type = "button";
  minus.textContent = "-";
  minus.addEventListener("click", () => {
    chip.weight = Math.max(0.5, chip.weight - 0.5);
    renderConceptBuilder(container, state, handlers);
    handlers.onChange();
  });
  const plus = document.createElement("button");
  plus.type = "button";
  plus.textContent = "+";
  plus.addEventListener("click", () => {
    chip.weight += 0.5;
    renderConceptBuilder(container, state, handlers);
    handlers.onChange();
  });
  el.append(minus, plus);

  const remove = document.createElement("button");
  remove.type = "button";
  remove.className = "chip-remove";
  remove.textContent = "x";
  remove.addEventListener("click", () => {
    state.chips.splice(index, 1);
    renderConceptBuilder(container, state, handlers);
    handlers.onChange();
  });
  el.appendChild(remove);
  return el;
}

function renderFreeText(
  container: HTMLElement,
  state: ConceptBuilderState,
  handlers: BuilderHandlers,
): void {
  const area = document.createElement("textarea");
  area.className = "free-query";
  area.value = state.freeText;
  area.rows = 2;
  area.placeholder = 'e.g. person:2 AND (obj/dog OR NOT indoor)';
  area.addEventListener("input", () => {
    state.freeText = area.value;
    state.error = null;
    const preview = container.querySelector(".query-preview");
    if (preview) preview.textContent = currentQuery(state) || "(no concept query)";
    handlers.onChange();
  });
  container.appendChild(area);
}
