#!/usr/bin/env node
/**
 * Figure renderer CLI. Two invocation styles:
 *
 *   werma-render --spec fig3.toml
 *   werma-render rho_curves table.csv out.svg [--rho-tilde 7 --prior-ratio 4]
 *
 * Exit codes: 0 success, 2 bad spec/arguments, 3 table parse failure.
 */
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { render } from "./render";
import { FIGURE_KINDS, loadSpec, plotSpecSchema, SpecError } from "./spec";
import { TableError } from "./table";

export function main(argv: string[]): number {
  const parsed = yargs(argv)
    .scriptName("werma-render")
    .command("$0 [kind] [table] [output]", "render one figure from a sweep table",
             (y) => y
               .positional("kind", { type: "string",
                                     describe: FIGURE_KINDS.join("|") })
               .positional("table", { type: "string", describe: "input CSV table" })
               .positional("output", { type: "string", describe: ".svg or .png path" }))
    .option("spec", { type: "string", describe: "TOML plot spec file" })
    .option("title", { type: "string" })
    .option("rho-tilde", { type: "number", describe: "vertical marker (red)" })
    .option("prior-ratio", { type: "number", describe: "vertical marker (black)" })
    .option("width", { type: "number" })
    .option("height", { type: "number" })
    .help()
    .strict()
    .parseSync();

  try {
    let spec;
    if (parsed.spec) {
      spec = loadSpec(parsed.spec);
    } else {
      if (!parsed.kind || !parsed.table || !parsed.output) {
        throw new SpecError(
          "expected either --spec FILE or positional: kind table output " +
          `(kinds: ${FIGURE_KINDS.join(", ")})`,
        );
      }
      const candidate = plotSpecSchema.safeParse({
        kind: parsed.kind,
        input: parsed.table,
        output: parsed.output,
        title: parsed.title,
        rho_tilde: parsed["rho-tilde"],
        prior_ratio: parsed["prior-ratio"],
        ...(parsed.width !== undefined ? { width: parsed.width } : {}),
        ...(parsed.height !== undefined ? { height: parsed.height } : {}),
      });
      if (!candidate.success) {
        const issues = candidate.error.issues
          .map((issue) => `${issue.path.join(".") || "<root>"}: ${issue.message}`)
          .join("; ");
        throw new SpecError(issues);
      }
      spec = candidate.data;
    }
    const result = render(spec);
    process.stdout.write(
      `wrote ${result.format} figure: ${result.output} ` +
      `(${result.scene.series.length} series, ${result.scene.markers.length} markers)\n`,
    );
    return 0;
  } catch (error) {
    if (error instanceof SpecError) {
      process.stderr.write(`spec error: ${error.message}\n`);
      return 2;
    }
    if (error instanceof TableError) {
      process.stderr.write(`table error: ${error.message}\n`);
      return 3;
    }
    if (error instanceof Error && (error as NodeJS.ErrnoException).code === "ENOENT") {
      process.stderr.write(`file not found: ${error.message}\n`);
      return 2;
    }
    throw error;
  }
}

if (require.main === module) {
  process.exit(main(hideBin(process.argv)));
}
