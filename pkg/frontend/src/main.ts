// Operator console wiring: DOM controls on the left, scatter view on the
// right, event log below. State is rendered exclusively from server frames.

import {
  ALTITUDE_RANGE,
  AZIMUTH_RANGE,
  configure,
  launch,
  launchAt,
  RequestBody,
  setOrientation,
  setWheels,
  stir,
} from "./protocol.js";
import { GatewayClient } from "./socket.js";
import { ConsoleStore } from "./store.js";
import { computeStats, ellipseAreaMm2, formatMm, sigmaEllipse } from "./stats.js";
import { drawScatter } from "./scatter.js";

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

const input = (id: string) => $(id) as HTMLInputElement;
const button = (id: string) => $(id) as HTMLButtonElement;

const store = new ConsoleStore();

const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`;
const client = new GatewayClient(wsUrl, {
  onFrame: (frame) => store.applyFrame(frame, Date.now()),
  onStatus: (status) => {
    store.setStatus(status);
    if (status === "connected") primeSnapshot();
  },
});

// first paint straight away instead of waiting for the next broadcast
function primeSnapshot() {
  fetch("/state")
    .then((res) => (res.ok ? res.json() : null))
    .then((doc) => {
      if (doc) store.applyFrame({ type: "state", ...doc }, Date.now());
    })
    .catch(() => undefined); // the broadcast channel will catch us up
}

function sendRequest(body: RequestBody) {
  const id = client.request(body);
  if (id === null) {
    store.appendLog({ kind: "info", text: `not connected, dropped ${body.cmd}`, serverT: null });
    return;
  }
  store.registerRequest(id, body.cmd);
}

// ---- controls ----

const wheelIds = ["wheel-bottom", "wheel-top-left", "wheel-top-right"] as const;

function hookControls() {
  for (const id of wheelIds) {
    input(id).addEventListener("change", () => {
      sendRequest(
        setWheels(
          Number(input("wheel-bottom").value),
          Number(input("wheel-top-left").value),
          Number(input("wheel-top-right").value),
        ),
      );
    });
  }
  for (const id of ["azimuth", "altitude"]) {
    input(id).addEventListener("change", () => {
      sendRequest(
        setOrientation(Number(input("azimuth").value), Number(input("altitude").value)),
      );
    });
  }
  input("stroke-gain").addEventListener("change", () => {
    sendRequest(configure({ stroke_gain: Number(input("stroke-gain").value) }));
  });
  const sendRamp = () => {
    const continuous = input("ramp-continuous").checked;
    sendRequest(
      configure({
        ramp_up_time: continuous ? "continuous" : Number(input("ramp-time").value),
      }),
    );
  };
  input("ramp-time").addEventListener("change", sendRamp);
  input("ramp-continuous").addEventListener("change", sendRamp);
  input("pinch").addEventListener("change", () => {
    sendRequest(configure({ pinch_diameter_mm: Number(input("pinch").value) }));
  });

  button("launch-btn").addEventListener("click", () => sendRequest(launch()));
  button("launch-at-btn").addEventListener("click", () => {
    const snap = store.snapshot;
    if (!snap) return;
    const delay = Math.max(0.1, Number(input("launch-delay").value) || 1);
    sendRequest(launchAt(snap.t + delay));
  });
  button("stir-btn").addEventListener("click", () => sendRequest(stir()));
  button("clear-btn").addEventListener("click", () => store.clearLandings());

  // live slider value labels (display only, no requests)
  for (const id of [...wheelIds, "azimuth", "altitude"]) {
    input(id).addEventListener("input", () => {
      $(`${id}-val`).textContent = input(id).value;
    });
  }
}

// ---- rendering ----

const controlIds = [
  ...wheelIds,
  "azimuth",
  "altitude",
  "stroke-gain",
  "ramp-time",
  "ramp-continuous",
  "pinch",
  "launch-btn",
  "launch-at-btn",
  "launch-delay",
  "stir-btn",
];

function userIsEditing(el: HTMLInputElement): boolean {
  return document.activeElement === el;
}

function syncControl(id: string, value: string) {
  const el = input(id);
  if (userIsEditing(el)) return; // never yank a control out of the user's hand
  if (el.value !== value) {
    el.value = value;
    const label = document.getElementById(`${id}-val`);
    if (label) label.textContent = value;
  }
}

function render() {
  const snap = store.snapshot;
  const badge = $("status");
  badge.textContent = store.status;
  badge.className = `badge badge-${store.status}`;

  const enabled = store.controlsEnabled;
  for (const id of controlIds) {
    ($(id) as HTMLInputElement | HTMLButtonElement).disabled = !enabled;
  }

  if (snap) {
    const s = snap.state;
    $("state-wheels").textContent =
      `bottom ${s.wheel_actuation[0].toFixed(1)} / ` +
      `top left ${s.wheel_actuation[1].toFixed(1)} / ` +
      `top right ${s.wheel_actuation[2].toFixed(1)} %`;
    $("state-orientation").textContent =
      `azimuth ${s.azimuth_deg.toFixed(1)} deg, altitude ${s.altitude_deg.toFixed(1)} deg`;
    const ramp = s.ramp_up_time === "continuous" ? "continuous" : `${s.ramp_up_time} s`;
    $("state-config").textContent =
      `stroke gain ${s.stroke_gain}, ramp-up ${ramp}, pinch ${s.pinch_diameter_mm} mm`;
    $("state-feed").textContent =
      `${snap.feed.queue_length} balls queued` +
      (snap.feed.clogged ? ", clogged" : "") +
      (snap.feed.sensor_filled ? ", ball at sensor" : "") +
      ` | t=${snap.t.toFixed(1)} s | ${snap.launch_count} launched`;

    syncControl("wheel-bottom", String(s.wheel_actuation[0]));
    syncControl("wheel-top-left", String(s.wheel_actuation[1]));
    syncControl("wheel-top-right", String(s.wheel_actuation[2]));
    syncControl("azimuth", String(s.azimuth_deg));
    syncControl("altitude", String(s.altitude_deg));
    syncControl("stroke-gain", String(s.stroke_gain));
    if (s.ramp_up_time === "continuous") {
      if (!userIsEditing(input("ramp-continuous"))) input("ramp-continuous").checked = true;
    } else {
      if (!userIsEditing(input("ramp-continuous"))) input("ramp-continuous").checked = false;
      syncControl("ramp-time", String(s.ramp_up_time));
    }
    syncControl("pinch", String(s.pinch_diameter_mm));
  }

  renderScatter();
  renderLog();
}

function renderScatter() {
  const canvas = $("scatter") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const stats = computeStats(store.landings);
  drawScatter(ctx, canvas.width, canvas.height, store.landings, stats);

  const line = $("stats-line");
  if (!stats || stats.n < 2) {
    line.textContent = `${store.landings.length} landing(s), waiting for two or more`;
    return;
  }
  const area = ellipseAreaMm2(sigmaEllipse(stats));
  line.textContent =
    `n=${stats.n}  mean (${formatMm(stats.meanX)}, ${formatMm(stats.meanY)}) mm  ` +
    `sigma (${formatMm(stats.sigmaX)}, ${formatMm(stats.sigmaY)}) mm  ` +
    `3-sigma ellipse area ${Math.round(area)} mm^2`;
}

function renderLog() {
  const box = $("event-log");
  const rows = store.log
    .slice(-40)
    .reverse()
    .map((e) => {
      const t = e.serverT === null ? "" : `[t=${e.serverT.toFixed(2)}s] `;
      return `<div class="log-${e.kind}">${t}${e.text}</div>`;
    });
  box.innerHTML = rows.join("");
}

// ---- boot ----

hookControls();
store.subscribe(render);
setInterval(() => store.checkStale(Date.now()), 100);
client.connect();
render();

// bounds in the markup must match the protocol bounds; assert at startup
console.assert(
  Number(input("azimuth").min) === AZIMUTH_RANGE[0] &&
    Number(input("azimuth").max) === AZIMUTH_RANGE[1] &&
    Number(input("altitude").min) === ALTITUDE_RANGE[0] &&
    Number(input("altitude").max) === ALTITUDE_RANGE[1],
  "slider bounds drifted from protocol bounds",
);
