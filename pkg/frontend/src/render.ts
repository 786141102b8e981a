/**
 * The render operation: spec -> table -> scene -> image file. The output
 * extension picks the backend: .svg writes vector text, .png goes through
 * the built-in rasterizer.
 */
import { writeFileSync } from "node:fs";
import { extname } from "node:path";

import { encodePng } from "./png";
import { rasterizeScene } from "./raster";
import { buildScene, Scene } from "./scene";
import { PlotSpec, SpecError } from "./spec";
import { sceneToSvg } from "./svg";
import { readTable } from "./table";

export interface RenderResult {
  output: string;
  format: "svg" | "png";
  scene: Scene;
}

export function render(spec: PlotSpec): RenderResult {
  const table = readTable(spec.input);
  const scene = buildScene(spec, table);
  const ext = extname(spec.output).toLowerCase();
  if (ext === ".svg") {
    writeFileSync(spec.output, sceneToSvg(scene), "utf8");
    return { output: spec.output, format: "svg", scene };
  }
  if (ext === ".png") {
    const img = rasterizeScene(scene);
    writeFileSync(spec.output, encodePng(img.width, img.height, img.pixels));
    return { output: spec.output, format: "png", scene };
  }
  throw new SpecError(
    `unsupported output extension '${ext}': use .svg or .png`,
  );
}
