// Scatter view: recent landing points on a to-scale table outline, with the
// mean cross and the 3 sigma ellipse. Axis labels are millimeters.

import { ScatterStats, sigmaEllipse } from "./stats.js";

export const TABLE_LENGTH_M = 2.74; // x, away from the launcher
export const TABLE_WIDTH_M = 1.525; // y, across the table

export interface ViewBox {
  xMin: number; // meters, table frame
  xMax: number;
  yMin: number;
  yMax: number;
}

// the table plus a margin so near misses stay visible
export const DEFAULT_VIEW: ViewBox = {
  xMin: -0.15,
  xMax: TABLE_LENGTH_M + 0.15,
  yMin: -(TABLE_WIDTH_M / 2 + 0.15),
  yMax: TABLE_WIDTH_M / 2 + 0.15,
};

export interface Projection {
  scale: number; // pixels per meter, same on both axes (to scale)
  offsetX: number;
  offsetY: number;
}

export function fitProjection(view: ViewBox, widthPx: number, heightPx: number): Projection {
  const spanX = view.xMax - view.xMin;
  const spanY = view.yMax - view.yMin;
  const scale = Math.min(widthPx / spanX, heightPx / spanY);
  // center the view in the canvas
  return {
    scale,
    offsetX: (widthPx - spanX * scale) / 2,
    offsetY: (heightPx - spanY * scale) / 2,
  };
}

/** Table frame (m) to canvas pixels. +x right, +y up on screen. */
export function toCanvas(
  p: Projection,
  view: ViewBox,
  xM: number,
  yM: number,
): [number, number] {
  return [
    p.offsetX + (xM - view.xMin) * p.scale,
    p.offsetY + (view.yMax - yM) * p.scale,
  ];
}

export function mmLabel(m: number): string {
  const mm = m * 1000;
  // round half away from zero so the two table edges get symmetric labels
  return String(Math.sign(mm) * Math.round(Math.abs(mm)));
}

interface Palette {
  table: string;
  line: string;
  point: string;
  mean: string;
  ellipse: string;
  text: string;
}

const LIGHT: Palette = {
  table: "#1d6fa5",
  line: "#ffffff",
  point: "#ffb000",
  mean: "#ff3b30",
  ellipse: "#ff3b30",
  text: "#444444",
};

export function drawScatter(
  ctx: CanvasRenderingContext2D,
  widthPx: number,
  heightPx: number,
  landings: { x: number; y: number }[],
  stats: ScatterStats | null,
  view: ViewBox = DEFAULT_VIEW,
) {
  const proj = fitProjection(view, widthPx, heightPx);
  const at = (x: number, y: number) => toCanvas(proj, view, x, y);
  const pal = LIGHT;

  ctx.clearRect(0, 0, widthPx, heightPx);

  // table surface
  const [tx0, ty0] = at(0, TABLE_WIDTH_M / 2);
  const [tx1, ty1] = at(TABLE_LENGTH_M, -TABLE_WIDTH_M / 2);
  ctx.fillStyle = pal.table;
  ctx.fillRect(tx0, ty0, tx1 - tx0, ty1 - ty0);

  // net and center line
  ctx.strokeStyle = pal.line;
  ctx.lineWidth = 2;
  ctx.beginPath();
  const [nx0, ny0] = at(TABLE_LENGTH_M / 2, TABLE_WIDTH_M / 2);
  const [nx1, ny1] = at(TABLE_LENGTH_M / 2, -TABLE_WIDTH_M / 2);
  ctx.moveTo(nx0, ny0);
  ctx.lineTo(nx1, ny1);
  ctx.stroke();
  ctx.lineWidth = 1;
  ctx.setLineDash([6, 6]);
  ctx.beginPath();
  const [cx0, cy0] = at(0, 0);
  const [cx1, cy1] = at(TABLE_LENGTH_M, 0);
  ctx.moveTo(cx0, cy0);
  ctx.lineTo(cx1, cy1);
  ctx.stroke();
  ctx.setLineDash([]);

  // axis labels in mm along the table edges
  ctx.fillStyle = pal.text;
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  for (const xm of [0, TABLE_LENGTH_M / 2, TABLE_LENGTH_M]) {
    const [px, py] = at(xm, -TABLE_WIDTH_M / 2);
    ctx.fillText(mmLabel(xm), px, py + 14);
  }
  ctx.textAlign = "left";
  for (const ym of [TABLE_WIDTH_M / 2, 0, -TABLE_WIDTH_M / 2]) {
    const [px, py] = at(TABLE_LENGTH_M, ym);
    ctx.fillText(mmLabel(ym), px + 6, py + 4);
  }

  // landing points
  ctx.fillStyle = pal.point;
  for (const p of landings) {
    const [px, py] = at(p.x, p.y);
    ctx.beginPath();
    ctx.arc(px, py, 3, 0, 2 * Math.PI);
    ctx.fill();
  }

  if (!stats || stats.n < 2) return;

  // mean cross
  const [mx, my] = at(stats.meanX, stats.meanY);
  ctx.strokeStyle = pal.mean;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(mx - 7, my);
  ctx.lineTo(mx + 7, my);
  ctx.moveTo(mx, my - 7);
  ctx.lineTo(mx, my + 7);
  ctx.stroke();

  // 3 sigma ellipse
  const e = sigmaEllipse(stats);
  ctx.strokeStyle = pal.ellipse;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.ellipse(mx, my, e.rx * proj.scale, e.ry * proj.scale, 0, 0, 2 * Math.PI);
  ctx.stroke();
}
