/** Color maps for snapshot rendering. */

export type Rgb = [number, number, number];

function lerp(a: Rgb, b: Rgb, t: number): Rgb {
  return [
    Math.round(a[0] + (b[0] - a[0]) * t),
    Math.round(a[1] + (b[1] - a[1]) * t),
    Math.round(a[2] + (b[2] - a[2]) * t),
  ];
}

/** Temperature map: yellow through red to dark red as values increase. */
export function fire(t: number): Rgb {
  const x = Math.min(1, Math.max(0, t));
  const yellow: Rgb = [255, 230, 30];
  const red: Rgb = [220, 30, 20];
  const darkRed: Rgb = [90, 0, 0];
  return x < 0.5 ? lerp(yellow, red, 2 * x) : lerp(red, darkRed, 2 * (x - 0.5));
}

/** Fuel map: bare ground through green as values increase. */
export function vegetation(t: number): Rgb {
  const x = Math.min(1, Math.max(0, t));
  return lerp([80, 60, 40], [30, 180, 50], x);
}

export function grayscale(t: number): Rgb {
  const g = Math.round(255 * Math.min(1, Math.max(0, t)));
  return [g, g, g];
}

export const COLORMAPS: Record<string, (t: number) => Rgb> = {
  fire,
  vegetation,
  grayscale,
};
