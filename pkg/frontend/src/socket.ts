// WebSocket client for the gateway: request ids, frame dispatch, and
// reconnection with exponential backoff.

import { classifyFrame, Frame, RequestBody } from "./protocol.js";

// just the surface we touch, so tests can substitute a scripted socket
export interface WireSocket {
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => WireSocket;
export type TimerFn = (fn: () => void, ms: number) => void;

export type ConnectionStatus = "connecting" | "connected" | "reconnecting";

export interface GatewayOptions {
  onFrame: (frame: Frame) => void;
  onStatus: (status: ConnectionStatus) => void;
  makeSocket?: SocketFactory;
  setTimer?: TimerFn;
  backoffMs?: number[];
}

const DEFAULT_BACKOFF_MS = [500, 1000, 2000, 4000, 8000];

export class GatewayClient {
  private nextId = 1;
  private socket: WireSocket | null = null;
  private open = false;
  private attempts = 0;
  private stopped = false;

  private readonly makeSocket: SocketFactory;
  private readonly setTimer: TimerFn;
  private readonly backoffMs: number[];

  constructor(private readonly url: string, private readonly opts: GatewayOptions) {
    this.makeSocket = opts.makeSocket ?? ((u) => new WebSocket(u) as unknown as WireSocket);
    this.setTimer = opts.setTimer ?? ((fn, ms) => void setTimeout(fn, ms));
    this.backoffMs = opts.backoffMs ?? DEFAULT_BACKOFF_MS;
  }

  connect() {
    if (this.stopped) return;
    this.opts.onStatus(this.attempts === 0 ? "connecting" : "reconnecting");
    const socket = this.makeSocket(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.open = true;
      this.attempts = 0;
      this.opts.onStatus("connected");
    };
    socket.onmessage = (ev) => {
      this.opts.onFrame(classifyFrame(ev.data));
    };
    socket.onerror = () => {
      // the close handler owns recovery; some stacks fire only one of the two
    };
    socket.onclose = () => {
      if (this.socket !== socket) return; // an abandoned socket from before a reconnect
      this.open = false;
      this.socket = null;
      if (!this.stopped) this.scheduleReconnect();
    };
  }

  /**
   * Send one request frame and return its id, or null while disconnected.
   * One call, one frame: ids are assigned here and never reused.
   */
  request(body: RequestBody): number | null {
    if (!this.socket || !this.open) return null;
    const id = this.nextId++;
    this.socket.send(JSON.stringify({ id, ...body }));
    return id;
  }

  get connected(): boolean {
    return this.open;
  }

  close() {
    this.stopped = true;
    this.socket?.close();
    this.socket = null;
    this.open = false;
  }

  private scheduleReconnect() {
    this.opts.onStatus("reconnecting");
    const delay = this.backoffMs[Math.min(this.attempts, this.backoffMs.length - 1)];
    this.attempts += 1;
    this.setTimer(() => this.connect(), delay);
  }
}
