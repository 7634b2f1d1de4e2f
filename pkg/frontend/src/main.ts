// Application wiring: one session per tab, one in-flight query at a time.

import { api, keyframeUrl, taskFrameUrl, ApiError, type TaskInfo } from "./api";
import {
  renderConceptBuilder,
  currentQuery,
  type ConceptBuilderState,
} from "./concepts";
import { renderResults, type ResultsState } from "./results";
import {
  canonicalQueryBody,
  feedbackBody,
  hasModality,
  positiveBody,
  submitBody,
  type QueryParts,
} from "./serialize";
import { renderSessionControls, type UiSessionState } from "./session";
import { CanvasSketch, renderSketchCanvas } from "./sketch";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const taskId = new URLSearchParams(window.location.search).get("task") ?? undefined;
  const info = await api.createSession(taskId);

  const session: UiSessionState = {
    sessionId: info.session_id,
    budgetS: info.task ? info.task.budget_s : null,
    startedAtMs: Date.now(),
    positives: new Set(),
    locked: false,
    verdict: null,
  };

  if (info.task) renderTaskPanel(el("task-panel"), info.task);

  const sketch = new CanvasSketch();
  const builder: ConceptBuilderState = {
    chips: [],
    freeText: "",
    mode: "chips",
    error: null,
  };
  const results: ResultsState = {
    flat: [],
    groups: [],
    view: "grouped",
    positives: session.positives,
  };

  const statusLine = el("status");
  const setStatus = (text: string) => {
    statusLine.textContent = text;
  };

  const redrawResults = () => {
    renderResults(el("results"), results, {
      keyframeUrl,
      onMark: (shotId) => void mark(shotId),
      onSubmit: (shotId) => void submit(shotId),
    });
  };

  const redrawControls = () => {
    renderSessionControls(el("controls"), session, {
      onFeedback: () => void feedback(),
    });
  };

  // -- actions ---------------------------------------------------------

  let queryBusy = false;
  let queuedBody: string | null = null;

  async function runQuery(): Promise<void> {
    const parts: QueryParts = {
      sketch: sketch.toWire(),
      text: {
        text: el<HTMLInputElement>("text-input").value,
        field_weights: {
          description: Number(el<HTMLInputElement>("w-description").value),
          speech: Number(el<HTMLInputElement>("w-speech").value),
          ocr: Number(el<HTMLInputElement>("w-ocr").value),
        },
      },
      concept: currentQuery(builder),
      dropBlackAndWhite: el<HTMLInputElement>("flag-bw").checked,
      dropBlackBordered: el<HTMLInputElement>("flag-border").checked,
    };
    if (!hasModality(parts)) {
      setStatus("add a sketch, text, or concept query first");
      return;
    }
    const body = canonicalQueryBody(parts);
    if (queryBusy) {
      queuedBody = body; // latest wins once the current query settles
      return;
    }
    queryBusy = true;
    setStatus("searching...");
    try {
      const res = await api.query(session.sessionId, body);
      const grouped = await api.groupedResults(session.sessionId);
      results.flat = res.entries;
      results.groups = grouped.groups;
      builder.error = null;
      setStatus(`${res.entries.length} shots`);
      redrawResults();
    } catch (exc) {
      if (exc instanceof ApiError && (exc.detail as any)?.kind === "parse") {
        builder.error = {
          message: (exc.detail as any).error,
          offset: (exc.detail as any).offset,
        };
        renderConceptBuilder(el("concept-builder"), builder, builderHandlers);
        setStatus("concept query has a syntax error");
      } else {
        setStatus(`query failed: ${exc}`);
      }
    } finally {
      queryBusy = false;
      if (queuedBody !== null) {
        queuedBody = null;
        void runQuery();
      }
    }
  }

  async function mark(shotId: string): Promise<void> {
    if (session.locked) return;
    try {
      const doc = await api.markPositive(session.sessionId, positiveBody(shotId));
      session.positives.clear();
      for (const sid of doc.positives) session.positives.add(sid);
      setStatus(`${doc.positives.length} positives marked`);
      redrawControls();
      redrawResults();
    } catch (exc) {
      setStatus(`mark failed: ${exc}`);
    }
  }

  async function feedback(): Promise<void> {
    if (session.positives.size === 0 || session.locked) return;
    try {
      const lambda = Number(el<HTMLInputElement>("lambda").value);
      const res = await api.feedback(session.sessionId, feedbackBody(lambda));
      const grouped = await api.groupedResults(session.sessionId);
      results.flat = res.entries;
      results.groups = grouped.groups;
      setStatus("re-ranked by feedback (positives pinned on top)");
      redrawResults();
    } catch (exc) {
      setStatus(`feedback failed: ${exc}`);
    }
  }

  async function submit(shotId: string): Promise<void> {
    if (session.locked) return;
    try {
      const doc = await api.submit(session.sessionId, submitBody(shotId));
      session.verdict = doc.verdict;
      if (doc.verdict === "correct") {
        session.locked = true;
        setStatus(`correct: ${shotId}`);
      } else {
        setStatus(`incorrect: ${shotId}`);
      }
      redrawControls();
    } catch (exc) {
      if (exc instanceof ApiError && exc.status === 409) {
        session.verdict = "late";
        session.locked = true;
        redrawControls();
      }
      setStatus(`submission rejected: ${exc}`);
    }
  }

  // -- static wiring -----------------------------------------------------

  const builderHandlers = {
    autocomplete: (prefix: string, bank: string) => api.concepts(prefix, bank),
    onChange: () => undefined,
  };

  renderSketchCanvas(el("sketch-canvas"), sketch, {
    recommend: (x, y) => api.recommend(x, y),
    onChange: () => undefined,
  });
  renderConceptBuilder(el("concept-builder"), builder, builderHandlers);
  redrawControls();

  el<HTMLSelectElement>("sketch-level").addEventListener("change", (event) => {
    sketch.level = (event.target as HTMLSelectElement).value as "frame" | "shot";
  });
  el<HTMLButtonElement>("run-query").addEventListener("click", () => void runQuery());
  el<HTMLButtonElement>("clear-sketch").addEventListener("click", () => {
    sketch.clear();
    renderSketchCanvas(el("sketch-canvas"), sketch, {
      recommend: (x, y) => api.recommend(x, y),
      onChange: () => undefined,
    });
  });

  // view toggle: re-render from state the client already holds; never a request
  el<HTMLButtonElement>("view-toggle").addEventListener("click", () => {
    results.view = results.view === "grouped" ? "flat" : "grouped";
    el("view-toggle").textContent =
      results.view === "grouped" ? "switch to flat view" : "switch to video view";
    redrawResults();
  });

  setStatus("ready");
}

function renderTaskPanel(container: HTMLElement, task: TaskInfo): void {
  container.innerHTML = "";
  const title = document.createElement("h2");
  title.textContent = `${task.kind} task ${task.id}`;
  container.appendChild(title);
  if (task.kind === "textual") {
    const prompt = document.createElement("p");
    prompt.className = "task-prompt";
    prompt.textContent = task.prompt ?? "";
    container.appendChild(prompt);
  } else {
    const strip = document.createElement("div");
    strip.className = "target-strip";
    for (let i = 0; i < (task.target_frames ?? 0); i++) {
      const img = document.createElement("img");
      img.src = taskFrameUrl(task.id, i);
      img.alt = `target frame ${i}`;
      strip.appendChild(img);
    }
    container.appendChild(strip);
  }
}

if (typeof document !== "undefined" && document.getElementById("run-query")) {
  void boot();
}

export { boot };
