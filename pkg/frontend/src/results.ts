// Result browsing: grouped "dynamic image" tiles (one per video, cycling
// through that video's candidate keyframes on hover) and a traditional
// flat keyframe grid. Both views render from state the client already
// holds, so toggling never issues a request; orderings come verbatim
// from the service and are never re-sorted here.

import type { Entry, Group } from "./api";

export const HOVER_CYCLE_MS = 400;

export interface ResultsState {
  flat: Entry[];
  groups: Group[];
  view: "grouped" | "flat";
  positives: Set<string>;
}

export interface ResultsHandlers {
  keyframeUrl: (shotId: string) => string;
  onMark: (shotId: string) => void;
  onSubmit: (shotId: string) => void;
}

const timers = new WeakMap<HTMLElement, ReturnType<typeof setInterval>>();

function stopCycle(tile: HTMLElement): void {
  const timer = timers.get(tile);
  if (timer !== undefined) {
    clearInterval(timer);
    timers.delete(tile);
  }
}

function tileImage(tile: HTMLElement): HTMLImageElement {
  return tile.querySelector("img") as HTMLImageElement;
}

function renderTileActions(
  shotIdOf: () => string,
  handlers: ResultsHandlers,
): HTMLElement {
  const actions = document.createElement("div");
  actions.className = "tile-actions";
  const mark = document.createElement("button");
  mark.type = "button";
  mark.className = "mark-btn";
  mark.textContent = "+ relevant";
  mark.addEventListener("click", (event) => {
    event.stopPropagation();
    handlers.onMark(shotIdOf());
  });
  const submit = document.createElement("button");
  submit.type = "button";
  submit.className = "submit-btn";
  submit.textContent = "submit";
  submit.addEventListener("click", (event) => {
    event.stopPropagation();
    handlers.onSubmit(shotIdOf());
  });
  actions.append(mark, submit);
  return actions;
}

function renderGroupTile(group: Group, state: ResultsState, handlers: ResultsHandlers): HTMLElement {
  const tile = document.createElement("div");
  tile.className = "tile video-tile";
  tile.dataset.videoId = group.video_id;
  tile.dataset.index = "0";

  const img = document.createElement("img");
  img.src = handlers.keyframeUrl(group.entries[0].shot_id);
  img.alt = group.video_id;
  tile.appendChild(img);

  const caption = document.createElement("div");
  caption.className = "tile-caption";
  const updateCaption = (index: number) => {
    const entry = group.entries[index];
    const marked = state.positives.has(entry.shot_id) ? " *" : "";
    caption.textContent =
      `${group.video_id} (${index + 1}/${group.entries.length}) ` +
      `${entry.shot_id}${marked}`;
  };
  updateCaption(0);
  tile.appendChild(caption);

  // hover: cycle through this video's candidates in ranked order, wrapping;
  // leaving resets to the first frame
  tile.addEventListener("mouseenter", () => {
    if (group.entries.length < 2) return;
    stopCycle(tile);
    const timer = setInterval(() => {
      const next = (Number(tile.dataset.index) + 1) % group.entries.length;
      tile.dataset.index = String(next);
      tileImage(tile).src = handlers.keyframeUrl(group.entries[next].shot_id);
      updateCaption(next);
    }, HOVER_CYCLE_MS);
    timers.set(tile, timer);
  });
  tile.addEventListener("mouseleave", () => {
    stopCycle(tile);
    tile.dataset.index = "0";
    tileImage(tile).src = handlers.keyframeUrl(group.entries[0].shot_id);
    updateCaption(0);
  });

  tile.appendChild(
    renderTileActions(() => group.entries[Number(tile.dataset.index)].shot_id, handlers),
  );
  return tile;
}

function renderFlatTile(entry: Entry, state: ResultsState, handlers: ResultsHandlers): HTMLElement {
  const tile = document.createElement("div");
  tile.className = "tile shot-tile";
  tile.dataset.shotId = entry.shot_id;
  if (state.positives.has(entry.shot_id)) tile.classList.add("positive");

  const img = document.createElement("img");
  img.src = handlers.keyframeUrl(entry.shot_id);
  img.alt = entry.shot_id;
  tile.appendChild(img);

  const caption = document.createElement("div");
  caption.className = "tile-caption";
  caption.textContent = `${entry.shot_id} (${entry.score.toFixed(4)})`;
  tile.appendChild(caption);

  tile.appendChild(renderTileActions(() => entry.shot_id, handlers));
  return tile;
}

export function renderResults(
  container: HTMLElement,
  state: ResultsState,
  handlers: ResultsHandlers,
): void {
  container.querySelectorAll<HTMLElement>(".tile").forEach(stopCycle);
  container.innerHTML = "";
  container.classList.add("results");
  if (state.view === "grouped") {
    for (const group of state.groups) {
      container.appendChild(renderGroupTile(group, state, handlers));
    }
  } else {
    for (const entry of state.flat) {
      container.appendChild(renderFlatTile(entry, state, handlers));
    }
  }
  if ((state.view === "grouped" ? state.groups : state.flat).length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-results";
    empty.textContent = "no results";
    container.appendChild(empty);
  }
}
