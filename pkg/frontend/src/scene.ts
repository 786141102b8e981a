/**
 * Builds an abstract figure (series, markers, axes) from a sweep table.
 * The scene is backend-agnostic: svg.ts serializes it as vector text and
 * raster.ts draws it into pixels. Every number comes straight from the
 * table; the scene layer only scales coordinates.
 */
import { Table, numericColumn, requireColumns, TableError } from "./table";
import { PlotSpec } from "./spec";

export const RED = "#d62728";
export const BLACK = "#000000";
export const BLUE = "#1f77b4";
export const ORANGE = "#ff7f0e";
export const GREEN = "#2ca02c";
export const PURPLE = "#9467bd";

export interface Series {
  label: string;
  role: string;
  color: string;
  dashed: boolean;
  x: number[];
  y: number[];
  /** symmetric error-bar half-heights, one per point */
  errors?: number[];
}

export interface MarkerLine {
  orientation: "vertical" | "horizontal";
  value: number;
  color: string;
  role: string;
  label: string;
  dashed: boolean;
}

export interface Scene {
  width: number;
  height: number;
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  series: Series[];
  markers: MarkerLine[];
  marginText: string[];
}

function finitePairs(x: number[], y: number[], err?: number[]) {
  const fx: number[] = [];
  const fy: number[] = [];
  const fe: number[] = [];
  x.forEach((value, i) => {
    if (Number.isFinite(value) && Number.isFinite(y[i])) {
      fx.push(value);
      fy.push(y[i]);
      if (err) fe.push(Number.isFinite(err[i]) ? err[i] : 0);
    }
  });
  return { x: fx, y: fy, errors: err ? fe : undefined };
}

function riskSeries(table: Table, xColumn: string, rows: Record<string, string>[],
                    suffix = "", colors: [string, string] = [BLUE, ORANGE]): Series[] {
  const sub = { ...table, rows };
  const x = numericColumn(sub, xColumn);
  const out: Series[] = [];
  const defs: Array<[string, string, string]> = [
    [`risk_plus${suffix}`, "minority risk", colors[0]],
    [`risk_minus${suffix}`, "majority risk", colors[1]],
  ];
  for (const [column, label, color] of defs) {
    const pts = finitePairs(x, numericColumn(sub, column));
    out.push({ label, role: column, color, dashed: false, x: pts.x, y: pts.y });
  }
  return out;
}

function simOverlay(table: Table, xColumn: string,
                    rows: Record<string, string>[]): Series[] {
  if (!table.columns.includes("sim_risk_plus_mean")) return [];
  const sub = { ...table, rows };
  const x = numericColumn(sub, xColumn);
  const out: Series[] = [];
  const defs: Array<[string, string, string, string]> = [
    ["sim_risk_plus_mean", "sim_risk_plus_std", "minority risk (sim)", BLUE],
    ["sim_risk_minus_mean", "sim_risk_minus_std", "majority risk (sim)", ORANGE],
  ];
  for (const [meanCol, stdCol, label, color] of defs) {
    const pts = finitePairs(x, numericColumn(sub, meanCol), numericColumn(sub, stdCol));
    out.push({ label, role: meanCol, color, dashed: true,
               x: pts.x, y: pts.y, errors: pts.errors });
  }
  return out;
}

function metaNumber(table: Table, key: string): number | undefined {
  const raw = table.meta[key];
  if (raw === undefined) return undefined;
  const value = Number(raw);
  return Number.isFinite(value) ? value : undefined;
}

function wceAt(table: Table, marker: string): number | undefined {
  const row = table.rows.find((r) => r["marker"] === marker);
  if (!row) return undefined;
  const value = Number(row["wce"]);
  return Number.isFinite(value) ? value : undefined;
}

export function buildScene(spec: PlotSpec, table: Table): Scene {
  const scene: Scene = {
    width: spec.width,
    height: spec.height,
    title: spec.title ?? defaultTitle(spec, table),
    xLabel: "",
    yLabel: "per-class test error",
    logX: false,
    series: [],
    markers: [],
    marginText: [`table sha256:${table.checksum}`, `source ${table.path}`],
  };

  switch (spec.kind) {
    case "delta_curves": {
      requireColumns(table, ["delta", "risk_plus", "risk_minus"]);
      scene.xLabel = "overparameterization ratio delta";
      scene.series = [
        ...riskSeries(table, "delta", table.rows),
        ...simOverlay(table, "delta", table.rows),
      ];
      break;
    }
    case "pi_curves": {
      requireColumns(table, ["pi_plus", "risk_plus", "risk_minus"]);
      scene.xLabel = "minority prior pi_plus";
      scene.series = [
        ...riskSeries(table, "pi_plus", table.rows),
        ...simOverlay(table, "pi_plus", table.rows),
      ];
      break;
    }
    case "rho_curves": {
      requireColumns(table, ["rho", "risk_plus", "risk_minus", "wce", "marker"]);
      scene.xLabel = "weight ratio rho";
      scene.series = [
        ...riskSeries(table, "rho", table.rows),
        ...simOverlay(table, "rho", table.rows),
      ];
      const xs = numericColumn(table, "rho").filter(Number.isFinite);
      scene.logX = Math.max(...xs) / Math.max(Math.min(...xs), 1e-12) > 50;
      const rhoTilde = spec.rho_tilde ?? metaNumber(table, "rho_tilde");
      const priorRatio = spec.prior_ratio ?? metaNumber(table, "prior_ratio");
      if (rhoTilde !== undefined) {
        scene.markers.push({ orientation: "vertical", value: rhoTilde, color: RED,
                             role: "rho-tilde", label: `rho_tilde = ${rhoTilde}`,
                             dashed: false });
        const wce = wceAt(table, "rho_tilde");
        if (wce !== undefined) {
          scene.markers.push({ orientation: "horizontal", value: wce, color: RED,
                               role: "wce-rho-tilde",
                               label: `WCE(rho_tilde) = ${wce.toPrecision(4)}`,
                               dashed: true });
        }
      } else if (table.meta["rho_tilde"] === "infeasible") {
        scene.marginText.push("rho_tilde infeasible: risks never cross");
      }
      if (priorRatio !== undefined) {
        scene.markers.push({ orientation: "vertical", value: priorRatio, color: BLACK,
                             role: "prior-ratio", label: `prior ratio = ${priorRatio}`,
                             dashed: false });
        const wce = wceAt(table, "prior_ratio");
        if (wce !== undefined) {
          scene.markers.push({ orientation: "horizontal", value: wce, color: BLACK,
                               role: "wce-prior-ratio",
                               label: `WCE(prior) = ${wce.toPrecision(4)}`,
                               dashed: true });
        }
      }
      break;
    }
    case "ds_compare": {
      requireColumns(table, ["method", "delta", "risk_plus", "risk_minus", "wce"]);
      scene.xLabel = "overparameterization ratio delta";
      const werm = table.rows.filter((r) => r["method"] === "werm");
      const down = table.rows.filter((r) => r["method"] === "downsampled");
      if (werm.length === 0 || down.length === 0) {
        throw new TableError(
          `${table.path}: ds_compare table needs 'werm' and 'downsampled' rows`);
      }
      const wermSeries = riskSeries(table, "delta", werm, "", [RED, PURPLE]);
      wermSeries.forEach((s) => {
        s.label = `${s.label} (weighted)`;
        s.role = `werm_${s.role}`;
      });
      const downSeries = riskSeries(table, "delta", down, "", [BLACK, GREEN]);
      downSeries.forEach((s) => {
        s.label = `${s.label} (downsampled)`;
        s.role = `downsampled_${s.role}`;
        s.dashed = true;
      });
      scene.series = [...wermSeries, ...downSeries];
      break;
    }
    case "separation": {
      requireColumns(table, ["s", "wce_weighted", "wce_unweighted"]);
      scene.xLabel = "signal strength s";
      scene.yLabel = "worst-class error";
      const x = numericColumn(table, "s");
      const weighted = finitePairs(x, numericColumn(table, "wce_weighted"));
      const unweighted = finitePairs(x, numericColumn(table, "wce_unweighted"));
      scene.series = [
        { label: "weighted (equal-error)", role: "wce_weighted", color: RED,
          dashed: false, x: weighted.x, y: weighted.y },
        { label: "unweighted", role: "wce_unweighted", color: BLACK,
          dashed: false, x: unweighted.x, y: unweighted.y },
      ];
      const sStar = metaNumber(table, "s_star");
      if (sStar !== undefined) {
        scene.markers.push({ orientation: "vertical", value: sStar, color: RED,
                             role: "s-star", label: `s* = ${sStar.toPrecision(4)}`,
                             dashed: true });
      }
      break;
    }
  }
  if (scene.series.every((s) => s.x.length === 0)) {
    throw new TableError(`${table.path}: no plottable rows for this figure kind`);
  }
  return scene;
}

function defaultTitle(spec: PlotSpec, table: Table): string {
  const mode = table.meta["mode"] ?? spec.kind;
  return `${mode} — ${spec.kind}`;
}
