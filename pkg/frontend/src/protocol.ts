// Wire vocabulary for the launcher gateway.
//
// Requests are flat JSON objects: {"id": 1, "cmd": "set_wheels", "bottom": 38, ...}.
// The socket layer assigns ids; builders here produce everything after the id.
// Every builder clamps its arguments to the launcher's physical bounds, so an
// out-of-range request cannot be constructed no matter what the DOM hands us.

export const WHEEL_RANGE: readonly [number, number] = [0, 100];
export const AZIMUTH_RANGE: readonly [number, number] = [-15.8, 15.6];
export const ALTITUDE_RANGE: readonly [number, number] = [6.4, 37.1];
export const PINCH_RANGE: readonly [number, number] = [35.0, 40.0];

// stroke gain and ramp-up only have one-sided server bounds (> 0, >= 0)
const STROKE_GAIN_MIN = 0.01;

export type RampUpTime = number | "continuous";

export interface LauncherState {
  wheel_actuation: [number, number, number]; // bottom, top left, top right, percent
  azimuth_deg: number;
  altitude_deg: number;
  stroke_gain: number;
  ramp_up_time: RampUpTime;
  pinch_diameter_mm: number;
}

export interface FeedState {
  queue_length: number;
  clogged: boolean;
  sensor_filled: boolean;
}

export interface Snapshot {
  state: LauncherState;
  feed: FeedState;
  t: number; // server clock, seconds
  launch_count: number;
}

export interface LandingPoint {
  x: number;
  y: number;
  t: number;
}

export interface ServerEvent {
  kind: string; // "launched" | "feed_starved" | "clog_resolved"
  t?: number;
  landing?: LandingPoint | null;
}

export type Frame =
  | ({ type: "state" } & Snapshot)
  | { type: "event"; event: ServerEvent; t: number }
  | {
      type: "response";
      id: number;
      ok: boolean;
      state: LauncherState;
      feed: FeedState;
      t: number;
      event?: ServerEvent;
      error?: string;
    }
  | { type: "malformed"; raw: string; reason: string };

/** Sort one incoming WebSocket message into the frame taxonomy above. */
export function classifyFrame(raw: unknown): Frame {
  if (typeof raw !== "string") {
    return { type: "malformed", raw: String(raw), reason: "non-text frame" };
  }
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return { type: "malformed", raw, reason: "invalid JSON" };
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    return { type: "malformed", raw, reason: "frame is not an object" };
  }
  const d = doc as Record<string, unknown>;
  if (d.type === "state" && typeof d.t === "number") {
    return d as unknown as Frame;
  }
  if (d.type === "event" && typeof d.event === "object" && d.event !== null) {
    return d as unknown as Frame;
  }
  if (typeof d.id === "number" && typeof d.ok === "boolean") {
    return { ...(d as object), type: "response" } as Frame;
  }
  return { type: "malformed", raw, reason: "unrecognized frame shape" };
}

// ---- request builders ----

export interface RequestBody {
  cmd: string;
  [field: string]: unknown;
}

export function clamp(value: number, range: readonly [number, number]): number {
  if (!Number.isFinite(value)) return range[0];
  return Math.min(range[1], Math.max(range[0], value));
}

export function setWheels(bottom: number, topLeft: number, topRight: number): RequestBody {
  return {
    cmd: "set_wheels",
    bottom: clamp(bottom, WHEEL_RANGE),
    top_left: clamp(topLeft, WHEEL_RANGE),
    top_right: clamp(topRight, WHEEL_RANGE),
  };
}

export function setOrientation(azimuthDeg: number, altitudeDeg: number): RequestBody {
  return {
    cmd: "set_orientation",
    azimuth_deg: clamp(azimuthDeg, AZIMUTH_RANGE),
    altitude_deg: clamp(altitudeDeg, ALTITUDE_RANGE),
  };
}

export interface ConfigureFields {
  stroke_gain?: number;
  ramp_up_time?: RampUpTime;
  pinch_diameter_mm?: number;
}

export function configure(fields: ConfigureFields): RequestBody {
  const body: RequestBody = { cmd: "configure" };
  if (fields.stroke_gain !== undefined) {
    body.stroke_gain = Number.isFinite(fields.stroke_gain)
      ? Math.max(STROKE_GAIN_MIN, fields.stroke_gain)
      : STROKE_GAIN_MIN;
  }
  if (fields.ramp_up_time !== undefined) {
    body.ramp_up_time =
      fields.ramp_up_time === "continuous"
        ? "continuous"
        : Math.max(0, Number.isFinite(fields.ramp_up_time) ? fields.ramp_up_time : 0);
  }
  if (fields.pinch_diameter_mm !== undefined) {
    body.pinch_diameter_mm = clamp(fields.pinch_diameter_mm, PINCH_RANGE);
  }
  return body;
}

export function launch(): RequestBody {
  return { cmd: "launch" };
}

export function launchAt(tMonotonicS: number): RequestBody {
  return { cmd: "launch_at", t_monotonic_s: tMonotonicS };
}

export function stir(): RequestBody {
  return { cmd: "stir" };
}

export function ping(): RequestBody {
  return { cmd: "ping" };
}
