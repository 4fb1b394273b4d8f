import { beforeEach, describe, expect, it } from "vitest";

import { Frame, launch, ping } from "../src/protocol.js";
import { ConnectionStatus, GatewayClient, WireSocket } from "../src/socket.js";

class FakeSocket implements WireSocket {
  static instances: FakeSocket[] = [];

  onopen: (() => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: (() => void) | null = null;
  sent: string[] = [];
  closedByClient = false;

  constructor(public url: string) {
    FakeSocket.instances.push(this);
  }

  send(data: string) {
    this.sent.push(data);
  }

  close() {
    this.closedByClient = true;
    this.onclose?.();
  }

  // test-side controls
  open() {
    this.onopen?.();
  }

  receive(data: unknown) {
    this.onmessage?.({ data });
  }

  drop() {
    this.onerror?.();
    this.onclose?.();
  }
}

interface Timer {
  fn: () => void;
  ms: number;
}

function harness(backoffMs?: number[]) {
  FakeSocket.instances = [];
  const frames: Frame[] = [];
  const statuses: ConnectionStatus[] = [];
  const timers: Timer[] = [];
  const client = new GatewayClient("ws://test/ws", {
    onFrame: (f) => frames.push(f),
    onStatus: (s) => statuses.push(s),
    makeSocket: (url) => new FakeSocket(url),
    setTimer: (fn, ms) => void timers.push({ fn, ms }),
    backoffMs,
  });
  const current = () => FakeSocket.instances[FakeSocket.instances.length - 1];
  return { client, frames, statuses, timers, current };
}

beforeEach(() => {
  FakeSocket.instances = [];
});

describe("connection lifecycle", () => {
  it("reports connecting then connected", () => {
    const h = harness();
    h.client.connect();
    expect(h.statuses).toEqual(["connecting"]);
    h.current().open();
    expect(h.statuses).toEqual(["connecting", "connected"]);
    expect(h.client.connected).toBe(true);
  });

  it("parses incoming frames and hands them to the consumer", () => {
    const h = harness();
    h.client.connect();
    h.current().open();
    h.current().receive(JSON.stringify({ type: "state", state: {}, feed: {}, t: 1, launch_count: 0 }));
    h.current().receive("not json at all");
    expect(h.frames[0].type).toBe("state");
    expect(h.frames[1].type).toBe("malformed");
    // a later well-formed frame still arrives: the session survived
    h.current().receive(JSON.stringify({ type: "event", event: { kind: "launched" }, t: 2 }));
    expect(h.frames[2].type).toBe("event");
  });
});

describe("requests", () => {
  it("assigns strictly increasing ids starting at 1", () => {
    const h = harness();
    h.client.connect();
    h.current().open();
    expect(h.client.request(ping())).toBe(1);
    expect(h.client.request(launch())).toBe(2);
    const sent = h.current().sent.map((s) => JSON.parse(s));
    expect(sent).toEqual([
      { id: 1, cmd: "ping" },
      { id: 2, cmd: "launch" },
    ]);
  });

  it("sends exactly one frame per call, rapid double fire included", () => {
    const h = harness();
    h.client.connect();
    h.current().open();
    h.client.request(launch());
    h.client.request(launch());
    expect(h.current().sent).toHaveLength(2);
    const ids = h.current().sent.map((s) => JSON.parse(s).id);
    expect(new Set(ids).size).toBe(2);
  });

  it("refuses to send while disconnected", () => {
    const h = harness();
    h.client.connect(); // socket created but not open yet
    expect(h.client.request(ping())).toBeNull();
    expect(h.current().sent).toHaveLength(0);
  });
});

describe("reconnection", () => {
  it("backs off with escalating delays and caps", () => {
    const h = harness([500, 1000, 2000]);
    h.client.connect();
    h.current().drop();
    expect(h.statuses.at(-1)).toBe("reconnecting");
    expect(h.timers.map((t) => t.ms)).toEqual([500]);
    h.timers[0].fn(); // reconnect attempt fails again
    h.current().drop();
    h.timers[1].fn();
    h.current().drop();
    h.timers[2].fn();
    h.current().drop();
    expect(h.timers.map((t) => t.ms)).toEqual([500, 1000, 2000, 2000]);
  });

  it("resets the backoff after a successful connection", () => {
    const h = harness([500, 1000]);
    h.client.connect();
    h.current().drop();
    h.timers[0].fn();
    h.current().open(); // recovered
    expect(h.statuses.at(-1)).toBe("connected");
    h.current().drop(); // drops again later
    expect(h.timers.map((t) => t.ms)).toEqual([500, 500]);
  });

  it("opens a brand new socket per attempt", () => {
    const h = harness();
    h.client.connect();
    h.current().drop();
    h.timers[0].fn();
    expect(FakeSocket.instances).toHaveLength(2);
  });

  it("stays closed after an explicit close", () => {
    const h = harness();
    h.client.connect();
    h.current().open();
    h.client.close();
    expect(h.timers).toHaveLength(0); // no reconnect scheduled
    expect(h.client.connected).toBe(false);
  });
});
