/** Data-to-pixel mapping and tick placement shared by both backends. */
import { Scene } from "./scene";

export interface Frame {
  left: number;
  top: number;
  right: number;
  bottom: number;
  plotWidth: number;
  plotHeight: number;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  logX: boolean;
  xToPx(x: number): number;
  yToPx(y: number): number;
  xTicks: number[];
  yTicks: number[];
}

export function niceTicks(min: number, max: number, count = 6): number[] {
  if (!(max > min)) return [min];
  const span = max - min;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 2.5 * step, 5 * step, 10 * step];
  const chosen = candidates.find((c) => span / c <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let t = Math.ceil(min / chosen) * chosen; t <= max + 1e-12 * span; t += chosen) {
    ticks.push(Number(t.toPrecision(12)));
  }
  return ticks;
}

function logTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  const lo = Math.floor(Math.log10(min));
  const hi = Math.ceil(Math.log10(max));
  for (let p = lo; p <= hi; p += 1) {
    const t = Math.pow(10, p);
    if (t >= min * 0.999 && t <= max * 1.001) ticks.push(t);
  }
  return ticks.length >= 2 ? ticks : niceTicks(min, max);
}

export function buildFrame(scene: Scene): Frame {
  const left = 62;
  const top = 34;
  const right = scene.width - 16;
  const bottom = scene.height - 74;
  const xsAll: number[] = [];
  const ysAll: number[] = [];
  for (const s of scene.series) {
    xsAll.push(...s.x);
    s.y.forEach((y, i) => {
      ysAll.push(y);
      if (s.errors) {
        ysAll.push(y + s.errors[i], y - s.errors[i]);
      }
    });
  }
  for (const m of scene.markers) {
    (m.orientation === "vertical" ? xsAll : ysAll).push(m.value);
  }
  let xMin = Math.min(...xsAll);
  let xMax = Math.max(...xsAll);
  let yMin = Math.min(...ysAll, 0);
  let yMax = Math.max(...ysAll);
  if (!(xMax > xMin)) {
    xMin -= 0.5;
    xMax += 0.5;
  }
  if (!(yMax > yMin)) yMax = yMin + 1;
  yMax *= 1.06;
  const logX = scene.logX && xMin > 0;
  const xToPx = (x: number) => {
    const t = logX
      ? (Math.log(x) - Math.log(xMin)) / (Math.log(xMax) - Math.log(xMin))
      : (x - xMin) / (xMax - xMin);
    return left + t * (right - left);
  };
  const yToPx = (y: number) => bottom - ((y - yMin) / (yMax - yMin)) * (bottom - top);
  return {
    left, top, right, bottom,
    plotWidth: right - left,
    plotHeight: bottom - top,
    xMin, xMax, yMin, yMax, logX,
    xToPx, yToPx,
    xTicks: logX ? logTicks(xMin, xMax) : niceTicks(xMin, xMax),
    yTicks: niceTicks(yMin, yMax),
  };
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) return value.toExponential(0);
  return Number(value.toPrecision(4)).toString();
}
