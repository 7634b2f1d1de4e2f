// Thin typed client over the service's HTTP+JSON API.
//
// Every call goes through `http`, which counts requests per path group so
// tests can assert that browsing interactions (view toggles, hover
// cycling) never trigger queries.

import type { LabColor } from "./lab";

export interface SketchPointWire {
  x: number;
  y: number;
  color: LabColor;
}

export interface Entry {
  shot_id: string;
  score: number;
}

export interface Group {
  video_id: string;
  best_score: number;
  entries: Entry[];
}

export interface SessionInfo {
  session_id: string;
  started_at: number;
  task: TaskInfo | null;
}

export interface TaskInfo {
  id: string;
  kind: "visual" | "textual";
  budget_s: number;
  prompt?: string;
  target_frames?: number;
}

export interface RecommendedColor {
  index: number;
  rgb: [number, number, number];
  lab: LabColor;
  frequency: number;
}

export class ApiError extends Error {
  status: number;
  detail: unknown;

  constructor(status: number, detail: unknown) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
    this.status = status;
    this.detail = detail;
  }
}

const counters = new Map<string, number>();

function bump(group: string) {
  counters.set(group, (counters.get(group) ?? 0) + 1);
}

export function requestCount(group: string): number {
  return counters.get(group) ?? 0;
}

export function resetRequestCounts() {
  counters.clear();
}

function groupOf(path: string): string {
  if (path.includes("/query")) return "query";
  if (path.includes("/results")) return "results";
  if (path.includes("/feedback")) return "feedback";
  if (path.includes("/positive")) return "positive";
  if (path.includes("/submit")) return "submit";
  if (path.startsWith("/recommend")) return "recommend";
  if (path.startsWith("/concepts")) return "concepts";
  return "other";
}

let baseUrl = "";

export function setBaseUrl(url: string) {
  baseUrl = url.replace(/\/$/, "");
}

async function http(method: string, path: string, body?: string): Promise<unknown> {
  bump(groupOf(path));
  const resp = await fetch(baseUrl + path, {
    method,
    headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
    body,
  });
  const text = await resp.text();
  const doc = text ? JSON.parse(text) : null;
  if (!resp.ok) {
    throw new ApiError(resp.status, (doc && (doc as any).detail) ?? doc);
  }
  return doc;
}

export const api = {
  createSession(taskId?: string): Promise<SessionInfo> {
    const body = JSON.stringify(taskId ? { task_id: taskId } : {});
    return http("POST", "/session", body) as Promise<SessionInfo>;
  },

  // The body is a pre-serialized canonical query (see serialize.ts) so
  // what goes on the wire is exactly what the golden fixtures pin down.
  query(sessionId: string, canonicalBody: string): Promise<{ entries: Entry[] }> {
    return http("POST", `/session/${sessionId}/query`, canonicalBody) as Promise<{
      entries: Entry[];
    }>;
  },

  groupedResults(sessionId: string): Promise<{ groups: Group[] }> {
    return http("GET", `/session/${sessionId}/results?view=grouped`) as Promise<{
      groups: Group[];
    }>;
  },

  markPositive(sessionId: string, body: string): Promise<{ positives: string[] }> {
    return http("POST", `/session/${sessionId}/positive`, body) as Promise<{
      positives: string[];
    }>;
  },

  feedback(sessionId: string, body: string): Promise<{ entries: Entry[] }> {
    return http("POST", `/session/${sessionId}/feedback`, body) as Promise<{
      entries: Entry[];
    }>;
  },

  submit(sessionId: string, body: string): Promise<{ verdict: "correct" | "incorrect" }> {
    return http("POST", `/session/${sessionId}/submit`, body) as Promise<{
      verdict: "correct" | "incorrect";
    }>;
  },

  concepts(prefix: string, bank: string, limit = 8): Promise<{ labels: string[]; total: number }> {
    const q = new URLSearchParams({ prefix, bank, limit: String(limit) });
    return http("GET", `/concepts?${q}`) as Promise<{ labels: string[]; total: number }>;
  },

  recommend(x: number, y: number, n = 8): Promise<{ enabled: boolean; colors: RecommendedColor[] }> {
    const q = new URLSearchParams({ x: String(x), y: String(y), n: String(n) });
    return http("GET", `/recommend?${q}`) as Promise<{
      enabled: boolean;
      colors: RecommendedColor[];
    }>;
  },

  task(taskId: string): Promise<TaskInfo> {
    return http("GET", `/task/${taskId}`) as Promise<TaskInfo>;
  },
};

export function keyframeUrl(shotId: string): string {
  return `${baseUrl}/keyframe/${shotId}`;
}

export function taskFrameUrl(taskId: string, index: number): string {
  return `${baseUrl}/task/${taskId}/frame/${index}`;
}
