// Canonical request-body serialization.
//
// The service accepts any JSON key order, but the UI always emits one
// canonical layout so request bodies can be compared byte-for-byte
// against golden fixtures. Key order is fixed by construction below;
// Lab components are rounded to 4 decimals (see lab.ts); absent
// modalities are omitted entirely.

import type { SketchPointWire } from "./api";

export interface SketchWire {
  points: SketchPointWire[];
  level: "frame" | "shot";
}

export interface TextWire {
  text: string;
  field_weights: { description: number; speech: number; ocr: number };
}

export interface QueryParts {
  sketch?: SketchWire | null;
  text?: TextWire | null;
  concept?: string | null;
  modalityWeights?: Record<string, number>;
  dropBlackAndWhite?: boolean;
  dropBlackBordered?: boolean;
  limit?: number;
}

export function canonicalQueryBody(parts: QueryParts): string {
  const body: Record<string, unknown> = {};
  if (parts.sketch && parts.sketch.points.length > 0) {
    body.sketch = {
      points: parts.sketch.points.map((p) => ({
        x: p.x,
        y: p.y,
        color: { L: p.color.L, a: p.color.a, b: p.color.b },
      })),
      level: parts.sketch.level,
    };
  }
  if (parts.text && parts.text.text.trim() !== "") {
    body.text = {
      text: parts.text.text,
      field_weights: {
        description: parts.text.field_weights.description,
        speech: parts.text.field_weights.speech,
        ocr: parts.text.field_weights.ocr,
      },
    };
  }
  if (parts.concept && parts.concept.trim() !== "") {
    body.concept = parts.concept;
  }
  body.modality_weights = parts.modalityWeights ?? {};
  body.flags = {
    drop_black_and_white: parts.dropBlackAndWhite ?? false,
    drop_black_bordered: parts.dropBlackBordered ?? false,
  };
  body.limit = parts.limit ?? 1000;
  return JSON.stringify(body);
}

export function positiveBody(shotId: string): string {
  return JSON.stringify({ shot_id: shotId });
}

export function feedbackBody(lambda: number): string {
  return JSON.stringify({ lambda });
}

export function submitBody(shotId: string): string {
  return JSON.stringify({ shot_id: shotId });
}

export function hasModality(parts: QueryParts): boolean {
  return Boolean(
    (parts.sketch && parts.sketch.points.length > 0) ||
      (parts.text && parts.text.text.trim() !== "") ||
      (parts.concept && parts.concept.trim() !== ""),
  );
}
