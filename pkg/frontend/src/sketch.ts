// Sketch canvas: an 8x8 grid of placeable color cells, matching the
// service's recommendation grid. Clicking a cell opens the palette the
// corpus actually uses at that position (or a free picker when the
// recommendation module is off); placed cells serialize to sketch points
// at the cell centers.

import type { RecommendedColor } from "./api";
import { canonicalLab, rgbCss, rgbToLab } from "./lab";
import type { SketchWire } from "./serialize";

export const GRID = 8;
export const MAX_CELLS = 16;

export interface PlacedCell {
  cx: number;
  cy: number;
  rgb: [number, number, number];
}

export type RecommendFn = (x: number, y: number) => Promise<{ enabled: boolean; colors: RecommendedColor[] }>;

export function cellCenter(cx: number, cy: number): { x: number; y: number } {
  return { x: (cx + 0.5) / GRID, y: (cy + 0.5) / GRID };
}

export class CanvasSketch {
  private cells = new Map<string, PlacedCell>();
  level: "frame" | "shot" = "frame";

  place(cx: number, cy: number, rgb: [number, number, number]): void {
    const key = `${cx},${cy}`;
    if (!this.cells.has(key) && this.cells.size >= MAX_CELLS) {
      throw new Error(`at most ${MAX_CELLS} cells`);
    }
    this.cells.set(key, { cx, cy, rgb });
  }

  remove(cx: number, cy: number): void {
    this.cells.delete(`${cx},${cy}`);
  }

  get(cx: number, cy: number): PlacedCell | undefined {
    return this.cells.get(`${cx},${cy}`);
  }

  get size(): number {
    return this.cells.size;
  }

  clear(): void {
    this.cells.clear();
  }

  placed(): PlacedCell[] {
    return [...this.cells.values()].sort((a, b) => a.cy - b.cy || a.cx - b.cx);
  }

  // null when the canvas is empty: the sketch modality is then omitted
  // from the composite query.
  toWire(): SketchWire | null {
    const placed = this.placed();
    if (placed.length === 0) return null;
    return {
      points: placed.map((cell) => {
        const { x, y } = cellCenter(cell.cx, cell.cy);
        return { x, y, color: canonicalLab(rgbToLab(...cell.rgb)) };
      }),
      level: this.level,
    };
  }
}

interface SketchHandlers {
  recommend: RecommendFn;
  onChange: () => void;
}

export function renderSketchCanvas(
  container: HTMLElement,
  sketch: CanvasSketch,
  handlers: SketchHandlers,
): void {
  container.innerHTML = "";
  container.classList.add("sketch-grid");
  for (let cy = 0; cy < GRID; cy++) {
    for (let cx = 0; cx < GRID; cx++) {
      const cell = document.createElement("button");
      cell.type = "button";
      cell.className = "sketch-cell";
      cell.dataset.cx = String(cx);
      cell.dataset.cy = String(cy);
      const placed = sketch.get(cx, cy);
      if (placed) {
        cell.style.backgroundColor = rgbCss(placed.rgb);
        cell.classList.add("placed");
      }
      cell.addEventListener("click", () => {
        void openPalette(container, sketch, cx, cy, handlers);
      });
      cell.addEventListener("contextmenu", (event) => {
        event.preventDefault();
        sketch.remove(cx, cy);
        renderSketchCanvas(container, sketch, handlers);
        handlers.onChange();
      });
      container.appendChild(cell);
    }
  }
}

async function openPalette(
  container: HTMLElement,
  sketch: CanvasSketch,
  cx: number,
  cy: number,
  handlers: SketchHandlers,
): Promise<void> {
  closePalette(container);
  const { x, y } = cellCenter(cx, cy);
  let colors: RecommendedColor[] = [];
  try {
    const doc = await handlers.recommend(x, y);
    colors = doc.colors;
  } catch {
    colors = [];
  }

  const menu = document.createElement("div");
  menu.className = "palette-menu";
  menu.dataset.cx = String(cx);
  menu.dataset.cy = String(cy);

  const pick = (rgb: [number, number, number]) => {
    sketch.place(cx, cy, rgb);
    closePalette(container);
    renderSketchCanvas(container, sketch, handlers);
    handlers.onChange();
  };

  if (colors.length > 0) {
    for (const color of colors) {
      const swatch = document.createElement("button");
      swatch.type = "button";
      swatch.className = "palette-swatch";
      swatch.style.backgroundColor = rgbCss(color.rgb);
      swatch.title = `${Math.round(color.frequency * 100)}% of centroids here`;
      swatch.addEventListener("click", () => pick(color.rgb));
      menu.appendChild(swatch);
    }
  }
  // Free picker: the fallback when recommendations are disabled or the
  // cell is empty, and always available as an escape hatch.
  const free = document.createElement("input");
  free.type = "color";
  free.className = "palette-free";
  free.addEventListener("change", () => {
    const v = free.value;
    pick([
      parseInt(v.slice(1, 3), 16),
      parseInt(v.slice(3, 5), 16),
      parseInt(v.slice(5, 7), 16),
    ]);
  });
  menu.appendChild(free);
  container.appendChild(menu);
}

export function closePalette(container: HTMLElement): void {
  container.querySelectorAll(".palette-menu").forEach((el) => el.remove());
}
