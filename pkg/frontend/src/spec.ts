/**
 * PlotSpec: what to draw from which table into which image file.
 * Spec files are flat TOML (key = value pairs); a minimal reader covers
 * strings, numbers and booleans, which is all a plot spec needs.
 */
import { readFileSync } from "node:fs";
import { z } from "zod";

export const FIGURE_KINDS = [
  "delta_curves",
  "rho_curves",
  "pi_curves",
  "ds_compare",
  "separation",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export const plotSpecSchema = z.object({
  kind: z.enum(FIGURE_KINDS),
  input: z.string().min(1),
  output: z.string().min(1),
  title: z.string().optional(),
  // marker annotations; when omitted they are read from the table metadata
  rho_tilde: z.number().positive().optional(),
  prior_ratio: z.number().positive().optional(),
  width: z.number().int().min(200).default(720),
  height: z.number().int().min(150).default(480),
});

export type PlotSpec = z.infer<typeof plotSpecSchema>;

export class SpecError extends Error {}

/** Flat TOML subset: comments, bare/quoted strings, numbers, booleans. */
export function parseFlatToml(text: string): Record<string, unknown> {
  const out: Record<string, unknown> = {};
  text.split(/\r?\n/).forEach((raw, index) => {
    const line = raw.trim();
    if (line === "" || line.startsWith("#")) return;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new SpecError(`line ${index + 1}: expected 'key = value', got '${line}'`);
    }
    const key = line.slice(0, eq).trim();
    let value = line.slice(eq + 1).trim();
    const comment = value.search(/\s#/);
    if (comment >= 0 && !value.startsWith('"')) value = value.slice(0, comment).trim();
    if (value.startsWith('"') && value.endsWith('"')) {
      out[key] = value.slice(1, -1);
    } else if (value === "true" || value === "false") {
      out[key] = value === "true";
    } else if (value !== "" && !Number.isNaN(Number(value))) {
      out[key] = Number(value);
    } else {
      throw new SpecError(`line ${index + 1}: cannot parse value '${value}'`);
    }
  });
  return out;
}

export function loadSpec(path: string): PlotSpec {
  const raw = parseFlatToml(readFileSync(path, "utf8"));
  const parsed = plotSpecSchema.safeParse(raw);
  if (!parsed.success) {
    const issues = parsed.error.issues
      .map((issue) => `${issue.path.join(".") || "<root>"}: ${issue.message}`)
      .join("; ");
    throw new SpecError(`${path}: ${issues}`);
  }
  return parsed.data;
}
