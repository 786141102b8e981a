/**
 * Scene -> RGB pixel buffer, for .png outputs. Solid lines via Bresenham
 * (with optional dash phase), text via the embedded 5x7 font. No
 * antialiasing: the raster backend exists so the documented PNG path
 * works without a canvas binding, not for print-quality output.
 */
import { GLYPH_HEIGHT, GLYPH_WIDTH, glyphRows } from "./font";
import { Frame, buildFrame, formatTick } from "./layout";
import { Scene } from "./scene";

type Color = [number, number, number];

function parseColor(hex: string): Color {
  const h = hex.replace("#", "");
  return [
    parseInt(h.slice(0, 2), 16),
    parseInt(h.slice(2, 4), 16),
    parseInt(h.slice(4, 6), 16),
  ];
}

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly pixels: Buffer;

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.pixels = Buffer.alloc(width * height * 3, 0xff);
  }

  set(x: number, y: number, color: Color): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const at = (y * this.width + x) * 3;
    this.pixels[at] = color[0];
    this.pixels[at + 1] = color[1];
    this.pixels[at + 2] = color[2];
  }

  dot(x: number, y: number, color: Color, thickness = 1): void {
    const r = Math.floor(thickness / 2);
    for (let dy = -r; dy <= r; dy += 1) {
      for (let dx = -r; dx <= r; dx += 1) {
        this.set(x + dx, y + dy, color);
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, color: Color,
       thickness = 1, dashed = false): void {
    let x = Math.round(x0);
    let y = Math.round(y0);
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    for (;;) {
      if (!dashed || step % 10 < 6) this.dot(x, y, color, thickness);
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
      step += 1;
    }
  }

  text(x: number, y: number, content: string, color: Color, scale = 1): void {
    let cx = Math.round(x);
    for (const ch of content) {
      const rows = glyphRows(ch);
      for (let r = 0; r < GLYPH_HEIGHT; r += 1) {
        for (let c = 0; c < GLYPH_WIDTH; c += 1) {
          if (rows[r] & (1 << (GLYPH_WIDTH - 1 - c))) {
            for (let sy = 0; sy < scale; sy += 1) {
              for (let sx = 0; sx < scale; sx += 1) {
                this.set(cx + c * scale + sx, y + r * scale + sy, color);
              }
            }
          }
        }
      }
      cx += (GLYPH_WIDTH + 1) * scale;
    }
  }
}

const AXIS: Color = [68, 68, 68];
const TEXT: Color = [30, 30, 30];
const FAINT: Color = [119, 119, 119];

export function rasterizeScene(scene: Scene): Raster {
  const frame: Frame = buildFrame(scene);
  const img = new Raster(scene.width, scene.height);

  img.text(Math.max(8, scene.width / 2 - scene.title.length * 3.5), 10,
           scene.title, TEXT, 1);

  // axes box
  img.line(frame.left, frame.top, frame.right, frame.top, AXIS);
  img.line(frame.left, frame.bottom, frame.right, frame.bottom, AXIS);
  img.line(frame.left, frame.top, frame.left, frame.bottom, AXIS);
  img.line(frame.right, frame.top, frame.right, frame.bottom, AXIS);
  for (const t of frame.xTicks) {
    const px = frame.xToPx(t);
    img.line(px, frame.bottom, px, frame.bottom + 4, AXIS);
    const label = formatTick(t);
    img.text(px - label.length * 3, frame.bottom + 8, label, TEXT);
  }
  for (const t of frame.yTicks) {
    const py = frame.yToPx(t);
    img.line(frame.left - 4, py, frame.left, py, AXIS);
    const label = formatTick(t);
    img.text(frame.left - 6 - label.length * 6, py - 3, label, TEXT);
  }
  img.text((frame.left + frame.right) / 2 - scene.xLabel.length * 3,
           frame.bottom + 24, scene.xLabel, TEXT);
  img.text(8, frame.top - 12, scene.yLabel, TEXT);

  for (const m of scene.markers) {
    const color = parseColor(m.color);
    if (m.orientation === "vertical") {
      const px = frame.xToPx(m.value);
      img.line(px, frame.top, px, frame.bottom, color, 1, m.dashed);
      img.text(px + 4, frame.top + 4, m.label, color);
    } else {
      const py = frame.yToPx(m.value);
      img.line(frame.left, py, frame.right, py, color, 1, m.dashed);
    }
  }

  for (const s of scene.series) {
    const color = parseColor(s.color);
    for (let i = 1; i < s.x.length; i += 1) {
      img.line(frame.xToPx(s.x[i - 1]), frame.yToPx(s.y[i - 1]),
               frame.xToPx(s.x[i]), frame.yToPx(s.y[i]), color, 2, s.dashed);
    }
    if (s.errors) {
      s.x.forEach((x, i) => {
        const px = frame.xToPx(x);
        img.line(px, frame.yToPx(s.y[i] - (s.errors as number[])[i]),
                 px, frame.yToPx(s.y[i] + (s.errors as number[])[i]), color);
      });
    }
  }

  // legend
  let ly = frame.top + 8;
  for (const s of scene.series) {
    const lx = frame.right - 215;
    img.line(lx, ly, lx + 22, ly, parseColor(s.color), 2, s.dashed);
    img.text(lx + 27, ly - 3, s.label, TEXT);
    ly += 13;
  }

  scene.marginText.forEach((line, i) => {
    img.text(frame.left, scene.height - 28 + i * 10, line, FAINT);
  });
  return img;
}
