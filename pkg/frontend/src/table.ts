/**
 * Parser for the sweep CLI's CSV tables: '#'-prefixed metadata lines,
 * a header row, then comma-separated data rows. The renderer is a pure
 * view of these tables; it never recomputes any value, and it echoes a
 * checksum of the raw bytes into the figure margin so a mismatch between
 * a figure and its table is detectable.
 */
import { createHash } from "node:crypto";
import { readFileSync } from "node:fs";

export interface Table {
  path: string;
  meta: Record<string, string>;
  columns: string[];
  rows: Record<string, string>[];
  checksum: string;
}

export class TableError extends Error {}

export function parseTable(text: string, path = "<memory>"): Table {
  const meta: Record<string, string> = {};
  const rows: Record<string, string>[] = [];
  let columns: string[] | null = null;
  for (const raw of text.split(/\r?\n/)) {
    const line = raw.trimEnd();
    if (line === "") continue;
    if (line.startsWith("#")) {
      const body = line.slice(1);
      const sep = body.indexOf(":");
      if (sep >= 0) {
        meta[body.slice(0, sep).trim()] = body.slice(sep + 1).trim();
      }
      continue;
    }
    const cells = line.split(",");
    if (columns === null) {
      columns = cells.map((c) => c.trim());
      continue;
    }
    if (cells.length !== columns.length) {
      throw new TableError(
        `${path}: row has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((name, i) => (row[name] = cells[i]));
    rows.push(row);
  }
  if (columns === null) {
    throw new TableError(`${path}: no header row found`);
  }
  const checksum = createHash("sha256").update(text).digest("hex").slice(0, 12);
  return { path, meta, columns, rows, checksum };
}

export function readTable(path: string): Table {
  return parseTable(readFileSync(path, "utf8"), path);
}

/** Numeric column accessor that names the missing column in its error. */
export function numericColumn(table: Table, name: string): number[] {
  if (!table.columns.includes(name)) {
    throw new TableError(
      `${table.path}: required column '${name}' not in header [${table.columns.join(", ")}]`,
    );
  }
  return table.rows.map((row) => {
    const cell = row[name];
    if (cell === "" || cell === undefined) return NaN;
    const value = Number(cell);
    if (Number.isNaN(value)) {
      throw new TableError(
        `${table.path}: column '${name}' has non-numeric cell '${cell}'`,
      );
    }
    return value;
  });
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new TableError(
        `${table.path}: required column '${name}' not in header [${table.columns.join(", ")}]`,
      );
    }
  }
}
