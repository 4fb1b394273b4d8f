// Landing scatter statistics, matching the control server's estimator:
// population standard deviation (divide by n), ellipse area pi * sx * sy.

export interface ScatterStats {
  n: number;
  meanX: number; // meters, table frame
  meanY: number;
  sigmaX: number;
  sigmaY: number;
}

export interface SigmaEllipse {
  cx: number; // meters
  cy: number;
  rx: number; // semi-axis, 3 sigma
  ry: number;
}

export function computeStats(points: { x: number; y: number }[]): ScatterStats | null {
  const n = points.length;
  if (n === 0) return null;
  let sx = 0;
  let sy = 0;
  for (const p of points) {
    sx += p.x;
    sy += p.y;
  }
  const meanX = sx / n;
  const meanY = sy / n;
  let vx = 0;
  let vy = 0;
  for (const p of points) {
    vx += (p.x - meanX) ** 2;
    vy += (p.y - meanY) ** 2;
  }
  return {
    n,
    meanX,
    meanY,
    sigmaX: Math.sqrt(vx / n),
    sigmaY: Math.sqrt(vy / n),
  };
}

/** The scatter view draws the ellipse at three standard deviations. */
export function sigmaEllipse(stats: ScatterStats): SigmaEllipse {
  return {
    cx: stats.meanX,
    cy: stats.meanY,
    rx: 3 * stats.sigmaX,
    ry: 3 * stats.sigmaY,
  };
}

export function ellipseAreaMm2(e: SigmaEllipse): number {
  return Math.PI * metersToMm(e.rx) * metersToMm(e.ry);
}

export function metersToMm(m: number): number {
  return m * 1000;
}

export function formatMm(m: number, digits = 1): string {
  return metersToMm(m).toFixed(digits);
}
