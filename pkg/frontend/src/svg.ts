/**
 * Scene -> SVG text. Elements carry data-role attributes so figures are
 * structurally testable: series polylines, marker lines with their data
 * values, error bars and the checksum margin text.
 */
import { Frame, buildFrame, formatTick } from "./layout";
import { Scene, Series } from "./scene";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function num(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function seriesElement(s: Series, frame: Frame): string {
  const pieces: string[] = [];
  const points = s.x
    .map((x, i) => `${num(frame.xToPx(x))},${num(frame.yToPx(s.y[i]))}`)
    .join(" ");
  const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
  pieces.push(
    `<polyline class="series" data-role="${esc(s.role)}" data-label="${esc(s.label)}" ` +
    `fill="none" stroke="${s.color}" stroke-width="1.8"${dash} points="${points}"/>`,
  );
  if (s.errors) {
    const bars = s.x.map((x, i) => {
      const px = frame.xToPx(x);
      const lo = frame.yToPx(s.y[i] - (s.errors as number[])[i]);
      const hi = frame.yToPx(s.y[i] + (s.errors as number[])[i]);
      return (
        `<line class="errorbar" data-role="${esc(s.role)}-errorbar" ` +
        `x1="${num(px)}" y1="${num(lo)}" x2="${num(px)}" y2="${num(hi)}" ` +
        `stroke="${s.color}" stroke-width="1"/>`
      );
    });
    pieces.push(...bars);
  }
  return pieces.join("\n");
}

export function sceneToSvg(scene: Scene): string {
  const frame = buildFrame(scene);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" ` +
    `height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}" ` +
    `font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${scene.width}" height="${scene.height}" fill="white"/>`);
  parts.push(
    `<text x="${scene.width / 2}" y="20" text-anchor="middle" font-size="14" ` +
    `data-role="title">${esc(scene.title)}</text>`,
  );

  // axes box and ticks
  parts.push(
    `<rect x="${frame.left}" y="${frame.top}" width="${frame.plotWidth}" ` +
    `height="${frame.plotHeight}" fill="none" stroke="#444" stroke-width="1"/>`,
  );
  for (const t of frame.xTicks) {
    const px = frame.xToPx(t);
    parts.push(
      `<line x1="${num(px)}" y1="${frame.bottom}" x2="${num(px)}" ` +
      `y2="${frame.bottom + 4}" stroke="#444"/>`,
      `<text x="${num(px)}" y="${frame.bottom + 17}" text-anchor="middle" ` +
      `font-size="11">${formatTick(t)}</text>`,
    );
  }
  for (const t of frame.yTicks) {
    const py = frame.yToPx(t);
    parts.push(
      `<line x1="${frame.left - 4}" y1="${num(py)}" x2="${frame.left}" ` +
      `y2="${num(py)}" stroke="#444"/>`,
      `<text x="${frame.left - 7}" y="${num(py + 4)}" text-anchor="end" ` +
      `font-size="11">${formatTick(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(frame.left + frame.right) / 2}" y="${frame.bottom + 34}" ` +
    `text-anchor="middle" font-size="12" data-role="x-label">${esc(scene.xLabel)}</text>`,
    `<text x="16" y="${(frame.top + frame.bottom) / 2}" text-anchor="middle" ` +
    `font-size="12" data-role="y-label" transform="rotate(-90 16 ` +
    `${(frame.top + frame.bottom) / 2})">${esc(scene.yLabel)}</text>`,
  );

  // markers behind the curves
  for (const m of scene.markers) {
    const dash = m.dashed ? ' stroke-dasharray="5,4"' : "";
    if (m.orientation === "vertical") {
      const px = frame.xToPx(m.value);
      parts.push(
        `<line class="marker" data-role="${esc(m.role)}" data-value="${m.value}" ` +
        `x1="${num(px)}" y1="${frame.top}" x2="${num(px)}" y2="${frame.bottom}" ` +
        `stroke="${m.color}" stroke-width="1.4"${dash}/>`,
        `<text x="${num(px + 4)}" y="${frame.top + 12}" font-size="10" ` +
        `fill="${m.color}">${esc(m.label)}</text>`,
      );
    } else {
      const py = frame.yToPx(m.value);
      parts.push(
        `<line class="marker" data-role="${esc(m.role)}" data-value="${m.value}" ` +
        `x1="${frame.left}" y1="${num(py)}" x2="${frame.right}" y2="${num(py)}" ` +
        `stroke="${m.color}" stroke-width="1.2"${dash}/>`,
      );
    }
  }

  for (const s of scene.series) {
    parts.push(seriesElement(s, frame));
  }

  // legend
  let ly = frame.top + 10;
  for (const s of scene.series) {
    const lx = frame.right - 215;
    const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" ` +
      `stroke="${s.color}" stroke-width="1.8"${dash}/>`,
      `<text x="${lx + 27}" y="${ly + 4}" font-size="11">${esc(s.label)}</text>`,
    );
    ly += 15;
  }

  // margin text (checksum and provenance)
  scene.marginText.forEach((line, i) => {
    parts.push(
      `<text x="${frame.left}" y="${scene.height - 22 + i * 12}" font-size="9" ` +
      `fill="#777" data-role="margin-text">${esc(line)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
