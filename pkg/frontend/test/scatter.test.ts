import { describe, expect, it } from "vitest";

import {
  DEFAULT_VIEW,
  fitProjection,
  mmLabel,
  TABLE_LENGTH_M,
  TABLE_WIDTH_M,
  toCanvas,
} from "../src/scatter.js";

const W = 840;
const H = 520;

describe("projection", () => {
  const proj = fitProjection(DEFAULT_VIEW, W, H);

  it("uses one scale for both axes, so the table stays to scale", () => {
    const [x0] = toCanvas(proj, DEFAULT_VIEW, 0, 0);
    const [x1] = toCanvas(proj, DEFAULT_VIEW, 1, 0);
    const [, y0] = toCanvas(proj, DEFAULT_VIEW, 0, 0);
    const [, y1] = toCanvas(proj, DEFAULT_VIEW, 0, 1);
    expect(x1 - x0).toBeCloseTo(proj.scale, 9);
    expect(y0 - y1).toBeCloseTo(proj.scale, 9); // +y is up on screen
  });

  it("keeps the whole table inside the canvas", () => {
    const corners: [number, number][] = [
      [0, TABLE_WIDTH_M / 2],
      [0, -TABLE_WIDTH_M / 2],
      [TABLE_LENGTH_M, TABLE_WIDTH_M / 2],
      [TABLE_LENGTH_M, -TABLE_WIDTH_M / 2],
    ];
    for (const [xm, ym] of corners) {
      const [px, py] = toCanvas(proj, DEFAULT_VIEW, xm, ym);
      expect(px).toBeGreaterThanOrEqual(0);
      expect(px).toBeLessThanOrEqual(W);
      expect(py).toBeGreaterThanOrEqual(0);
      expect(py).toBeLessThanOrEqual(H);
    }
  });

  it("centers the view", () => {
    const midX = (DEFAULT_VIEW.xMin + DEFAULT_VIEW.xMax) / 2;
    const midY = (DEFAULT_VIEW.yMin + DEFAULT_VIEW.yMax) / 2;
    const [px, py] = toCanvas(proj, DEFAULT_VIEW, midX, midY);
    expect(px).toBeCloseTo(W / 2, 6);
    expect(py).toBeCloseTo(H / 2, 6);
  });

  it("maps the table center line onto the net position", () => {
    const [nx] = toCanvas(proj, DEFAULT_VIEW, TABLE_LENGTH_M / 2, 0);
    const [x0] = toCanvas(proj, DEFAULT_VIEW, 0, 0);
    const [x1] = toCanvas(proj, DEFAULT_VIEW, TABLE_LENGTH_M, 0);
    expect(nx).toBeCloseTo((x0 + x1) / 2, 9);
  });
});

describe("axis labels", () => {
  it("are printed in millimeters", () => {
    expect(mmLabel(0)).toBe("0");
    expect(mmLabel(TABLE_LENGTH_M)).toBe("2740");
    expect(mmLabel(TABLE_WIDTH_M / 2)).toBe("763");
    expect(mmLabel(-TABLE_WIDTH_M / 2)).toBe("-763");
  });
});
