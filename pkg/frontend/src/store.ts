// Ordered state store between the WebSocket handler and the render loop.
//
// All server truth lives here. The UI never updates state optimistically;
// it sends a request and waits for the next response or broadcast.

import { Frame, Snapshot } from "./protocol.js";

export const BROADCAST_INTERVAL_MS = 200;
// displayed state must never be older than two broadcast intervals
export const STALE_AFTER_MS = 2 * BROADCAST_INTERVAL_MS;

const LANDING_CAP = 50;
const LOG_CAP = 200;

export type Status = "connecting" | "connected" | "reconnecting" | "stale";

export interface LogEntry {
  kind: "event" | "error" | "protocol" | "info";
  text: string;
  serverT: number | null; // server clock when the server stamped it
}

export class ConsoleStore {
  status: Status = "connecting";
  snapshot: Snapshot | null = null;
  receivedAtMs: number | null = null; // wall clock of the last state-bearing frame
  pending = new Map<number, string>(); // request id -> cmd
  log: LogEntry[] = [];
  landings: { x: number; y: number }[] = [];
  version = 0;

  private listeners: (() => void)[] = [];

  subscribe(listener: () => void) {
    this.listeners.push(listener);
  }

  private touch() {
    this.version += 1;
    for (const fn of this.listeners) fn();
  }

  setStatus(status: Status) {
    if (this.status === status) return;
    this.status = status;
    this.touch();
  }

  registerRequest(id: number, cmd: string) {
    this.pending.set(id, cmd);
    this.touch();
  }

  applyFrame(frame: Frame, nowMs: number) {
    switch (frame.type) {
      case "state": {
        this.snapshot = {
          state: frame.state,
          feed: frame.feed,
          t: frame.t,
          launch_count: frame.launch_count,
        };
        this.receivedAtMs = nowMs;
        if (this.status === "stale") this.status = "connected";
        break;
      }
      case "response": {
        this.pending.delete(frame.id);
        // every response carries a full snapshot, so it refreshes the display too
        this.snapshot = {
          state: frame.state,
          feed: frame.feed,
          t: frame.t,
          launch_count: this.snapshot ? this.snapshot.launch_count : 0,
        };
        this.receivedAtMs = nowMs;
        if (this.status === "stale") this.status = "connected";
        if (!frame.ok) {
          this.appendLog({ kind: "error", text: frame.error ?? "request failed", serverT: frame.t });
        }
        // frame.event is intentionally not logged here: the server also pushes
        // it as an event frame, and each launch must appear in the log once
        break;
      }
      case "event": {
        const ev = frame.event;
        let text = ev.kind;
        if (ev.kind === "launched") {
          text = ev.landing
            ? `launched, landed at x=${ev.landing.x.toFixed(3)} m y=${ev.landing.y.toFixed(3)} m`
            : "launched, landing not estimated";
          if (ev.landing) {
            this.landings.push({ x: ev.landing.x, y: ev.landing.y });
            if (this.landings.length > LANDING_CAP) {
              this.landings.splice(0, this.landings.length - LANDING_CAP);
            }
          }
        } else if (ev.kind === "feed_starved") {
          text = "feed starved, no ball reached the wheels";
        } else if (ev.kind === "clog_resolved") {
          text = "feed clog cleared by the stirrer";
        }
        this.appendLog({ kind: "event", text, serverT: ev.t ?? frame.t });
        break;
      }
      case "malformed": {
        this.appendLog({
          kind: "protocol",
          text: `ignored malformed frame (${frame.reason})`,
          serverT: null,
        });
        break;
      }
    }
    this.touch();
  }

  /** Flip to "stale" when broadcasts stop arriving. Returns true on a change. */
  checkStale(nowMs: number): boolean {
    if (this.status !== "connected" || this.receivedAtMs === null) return false;
    if (nowMs - this.receivedAtMs <= STALE_AFTER_MS) return false;
    this.status = "stale";
    this.touch();
    return true;
  }

  clearLandings() {
    this.landings = [];
    this.touch();
  }

  appendLog(entry: LogEntry) {
    this.log.push(entry);
    if (this.log.length > LOG_CAP) {
      this.log.splice(0, this.log.length - LOG_CAP);
    }
  }

  get controlsEnabled(): boolean {
    return this.status === "connected" && this.snapshot !== null;
  }
}
