import { describe, expect, it, vi } from "vitest";

import { CanvasSketch, GRID, MAX_CELLS, cellCenter, renderSketchCanvas } from "../src/sketch";

describe("canvas model", () => {
  it("maps cells to their centers", () => {
    expect(cellCenter(0, 0)).toEqual({ x: 0.0625, y: 0.0625 });
    expect(cellCenter(7, 7)).toEqual({ x: 0.9375, y: 0.9375 });
    expect(cellCenter(3, 1)).toEqual({ x: 0.4375, y: 0.1875 });
  });

  it("caps at 16 placed cells", () => {
    const sketch = new CanvasSketch();
    for (let i = 0; i < MAX_CELLS; i++) {
      sketch.place(i % GRID, Math.floor(i / GRID), [9, 9, 9]);
    }
    expect(sketch.size).toBe(16);
    expect(() => sketch.place(7, 7, [1, 2, 3])).toThrow(/16/);
    // replacing an existing cell is fine at the cap
    sketch.place(0, 0, [200, 0, 0]);
    expect(sketch.get(0, 0)?.rgb).toEqual([200, 0, 0]);
  });

  it("empty canvas serializes to null (modality omitted)", () => {
    expect(new CanvasSketch().toWire()).toBeNull();
  });

  it("carries the level through to the wire form", () => {
    const sketch = new CanvasSketch();
    sketch.place(1, 1, [0, 0, 0]);
    sketch.level = "shot";
    expect(sketch.toWire()?.level).toBe("shot");
  });
});

describe("canvas DOM", () => {
  it("renders an 8x8 grid and marks placed cells", () => {
    const sketch = new CanvasSketch();
    sketch.place(2, 1, [255, 0, 0]);
    const host = document.createElement("div");
    document.body.appendChild(host);
    renderSketchCanvas(host, sketch, {
      recommend: vi.fn().mockResolvedValue({ enabled: true, colors: [] }),
      onChange: vi.fn(),
    });
    expect(host.querySelectorAll(".sketch-cell")).toHaveLength(64);
    const placed = host.querySelector<HTMLElement>('[data-cx="2"][data-cy="1"]');
    expect(placed?.classList.contains("placed")).toBe(true);
  });

  it("clicking a cell opens the recommended palette for its center", async () => {
    const sketch = new CanvasSketch();
    const host = document.createElement("div");
    document.body.appendChild(host);
    const recommend = vi.fn().mockResolvedValue({
      enabled: true,
      colors: [
        { index: 3, rgb: [200, 10, 10], lab: { L: 40, a: 60, b: 40 }, frequency: 0.9 },
      ],
    });
    renderSketchCanvas(host, sketch, { recommend, onChange: vi.fn() });

    host.querySelector<HTMLElement>('[data-cx="0"][data-cy="0"]')!.click();
    await vi.waitFor(() => {
      expect(host.querySelector(".palette-menu")).not.toBeNull();
    });
    expect(recommend).toHaveBeenCalledWith(0.0625, 0.0625);
    expect(host.querySelectorAll(".palette-swatch")).toHaveLength(1);

    host.querySelector<HTMLElement>(".palette-swatch")!.click();
    expect(sketch.get(0, 0)?.rgb).toEqual([200, 10, 10]);
  });

  it("falls back to the free picker when recommendations are empty", async () => {
    const sketch = new CanvasSketch();
    const host = document.createElement("div");
    document.body.appendChild(host);
    renderSketchCanvas(host, sketch, {
      recommend: vi.fn().mockResolvedValue({ enabled: false, colors: [] }),
      onChange: vi.fn(),
    });
    host.querySelector<HTMLElement>('[data-cx="4"][data-cy="4"]')!.click();
    await vi.waitFor(() => {
      expect(host.querySelector(".palette-menu")).not.toBeNull();
    });
    expect(host.querySelectorAll(".palette-swatch")).toHaveLength(0);
    expect(host.querySelector(".palette-free")).not.toBeNull();
  });
});
