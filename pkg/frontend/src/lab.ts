// sRGB (0..255) to CIELAB, D65 reference white. Same constants as the
// engine; the wire format carries Lab so the service owns no UI color
// logic. Values are rounded to 4 decimals before serialization so request
// bodies are byte-stable across platforms.

export interface LabColor {
  L: number;
  a: number;
  b: number;
}

const M = [
  [0.4124564, 0.3575761, 0.1804375],
  [0.2126729, 0.7151522, 0.072175],
  [0.0193339, 0.119192, 0.9503041],
];
const WHITE = [0.95047, 1.0, 1.08883];
const EPS = Math.pow(6 / 29, 3);

function linearize(c: number): number {
  const v = c / 255;
  return v <= 0.04045 ? v / 12.92 : Math.pow((v + 0.055) / 1.055, 2.4);
}

function f(t: number): number {
  return t > EPS ? Math.cbrt(t) : t / (3 * Math.pow(6 / 29, 2)) + 4 / 29;
}

export function rgbToLab(r: number, g: number, b: number): LabColor {
  const lin = [linearize(r), linearize(g), linearize(b)];
  const xyz = M.map((row) => row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2]);
  const [fx, fy, fz] = xyz.map((v, i) => f(v / WHITE[i]));
  return {
    L: 116 * fy - 16,
    a: 500 * (fx - fy),
    b: 200 * (fy - fz),
  };
}

export function round4(v: number): number {
  return Math.round(v * 10000) / 10000;
}

export function canonicalLab(color: LabColor): LabColor {
  return { L: round4(color.L), a: round4(color.a), b: round4(color.b) };
}

export function rgbCss(rgb: [number, number, number]): string {
  return `rgb(${rgb[0]}, ${rgb[1]}, ${rgb[2]})`;
}
