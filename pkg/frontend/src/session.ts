// Session controls: countdown mirroring the server budget, the feedback
// button (enabled only when positives exist), the submission verdict
// banner, and the end-of-task interface lock.

export interface UiSessionState {
  sessionId: string;
  budgetS: number | null; // null: free session without a task
  startedAtMs: number;
  positives: Set<string>;
  locked: boolean;
  verdict: "correct" | "incorrect" | "late" | null;
}

export interface SessionHandlers {
  onFeedback: () => void;
  now?: () => number;
}

export function remainingS(state: UiSessionState, nowMs: number): number | null {
  if (state.budgetS === null) return null;
  return Math.max(0, state.budgetS - (nowMs - state.startedAtMs) / 1000);
}

export function renderSessionControls(
  container: HTMLElement,
  state: UiSessionState,
  handlers: SessionHandlers,
): () => void {
  container.innerHTML = "";
  container.classList.add("session-controls");
  const now = handlers.now ?? (() => Date.now());

  const timer = document.createElement("span");
  timer.className = "countdown";
  const tick = () => {
    const left = remainingS(state, now());
    if (left === null) {
      timer.textContent = "free session";
      return;
    }
    const m = Math.floor(left / 60);
    const s = Math.floor(left % 60);
    timer.textContent = `${m}:${String(s).padStart(2, "0")}`;
    if (left <= 0 && !state.locked) {
      state.locked = true;
      state.verdict = state.verdict ?? "late";
      applyLock(container, state);
    }
  };
  tick();
  container.appendChild(timer);

  const feedback = document.createElement("button");
  feedback.type = "button";
  feedback.className = "feedback-btn";
  feedback.textContent = `feedback (${state.positives.size} marked)`;
  feedback.disabled = state.positives.size === 0 || state.locked;
  feedback.addEventListener("click", () => handlers.onFeedback());
  container.appendChild(feedback);

  const verdict = document.createElement("span");
  verdict.className = "verdict";
  if (state.verdict) {
    verdict.textContent = state.verdict;
    verdict.classList.add(`verdict-${state.verdict}`);
  }
  container.appendChild(verdict);

  applyLock(container, state);
  const interval = setInterval(tick, 1000);
  return () => clearInterval(interval);
}

function applyLock(container: HTMLElement, state: UiSessionState): void {
  const root = container.ownerDocument.body;
  if (state.locked) {
    root.classList.add("session-locked");
    container
      .querySelectorAll<HTMLButtonElement>("button")
      .forEach((btn) => (btn.disabled = true));
  } else {
    root.classList.remove("session-locked");
  }
}
