// Page wiring: one capture pad, enroll and verify buttons, weight bars
// after enrollment and a gauge plus per-phase heat strip after each
// verification attempt.

import { ApiClient } from "./api";
import { SignaturePad } from "./capture";
import { enrollFlow, heatStrip, REQUIRED_TRACES, verifyFlow } from "./flows";
import { CaptureTrace } from "./trace";

const api = new ApiClient("");
const traces: CaptureTrace[] = [];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(text: string, isError = false): void {
  const status = el<HTMLElement>("status");
  status.textContent = text;
  status.className = isError ? "status error" : "status";
}

function renderBars(container: HTMLElement, entries: { label: string; value: number }[],
                    scale: number): void {
  container.innerHTML = "";
  for (const entry of entries) {
    const row = document.createElement("div");
    row.className = "bar-row";
    const label = document.createElement("span");
    label.textContent = entry.label;
    const bar = document.createElement("div");
    bar.className = "bar";
    bar.style.width = `${Math.min(100, (entry.value / scale) * 100)}%`;
    bar.title = entry.value.toFixed(4);
    row.append(label, bar);
    container.appendChild(row);
  }
}

function renderGauge(similarity: number, threshold: number, genuine: boolean): void {
  const gauge = el<HTMLElement>("gauge");
  gauge.textContent = `${(similarity * 100).toFixed(1)}%`;
  gauge.className = genuine ? "gauge genuine" : "gauge forged";
  el<HTMLElement>("verdict").textContent = genuine
    ? `genuine (score above ${threshold})`
    : `forged (score at or below ${threshold})`;
}

export function init(): void {
  const pad = new SignaturePad(el<HTMLCanvasElement>("pad"));
  const counter = el<HTMLElement>("trace-count");

  pad.onTrace = (trace) => {
    traces.push(trace);
    counter.textContent = `${traces.length} trace(s) captured`;
    setStatus(traces.length < REQUIRED_TRACES
      ? `captured ${traces.length}/${REQUIRED_TRACES} for enrollment`
      : "enough traces for enrollment, or verify with the latest one");
  };
  pad.onDiscard = () => setStatus("trace too short, please draw again", true);

  el<HTMLButtonElement>("clear").addEventListener("click", () => {
    traces.length = 0;
    pad.clear();
    counter.textContent = "0 trace(s) captured";
    setStatus("cleared");
  });

  el<HTMLButtonElement>("enroll").addEventListener("click", async () => {
    const userId = el<HTMLInputElement>("user-id").value.trim();
    if (!userId) return setStatus("enter a user id first", true);
    pad.enabled = false;
    setStatus("enrolling...");
    const outcome = await enrollFlow(api, userId, traces.slice(0, REQUIRED_TRACES));
    pad.enabled = true;
    if (outcome.kind === "need_more") {
      setStatus(`need ${outcome.need} traces, have ${outcome.have}`, true);
    } else if (outcome.kind === "error") {
      setStatus(`enrollment failed: ${outcome.message} (traces kept)`, true);
    } else {
      renderBars(el<HTMLElement>("weights"),
        outcome.response.weights.map((w) => ({
          label: `${w.s}/${w.a} s${w.p} b${w.r}`, value: w.value,
        })), 1.0);
      setStatus(outcome.lowWeights
        ? "enrolled, but weights are uniformly low: the five signatures differ a lot"
        : "enrolled");
    }
  });

  el<HTMLButtonElement>("verify").addEventListener("click", async () => {
    const userId = el<HTMLInputElement>("user-id").value.trim();
    if (!userId) return setStatus("enter a user id first", true);
    const probe = traces[traces.length - 1];
    if (!probe) return setStatus("draw a signature to verify", true);
    pad.enabled = false;
    setStatus("verifying...");
    const outcome = await verifyFlow(api, userId, probe);
    pad.enabled = true;
    if (outcome.kind === "enroll_first") {
      setStatus("unknown user: enroll five signatures first", true);
    } else if (outcome.kind === "error") {
      setStatus(`verification failed: ${outcome.message}`, true);
    } else {
      const r = outcome.response;
      renderGauge(r.similarity, r.threshold, r.genuine);
      const strip = heatStrip(r.dtst);
      const top = Math.max(...strip.map((s) => s.value), 1e-9);
      renderBars(el<HTMLElement>("dtst"), strip, top);
      setStatus("verified");
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("pad")) {
  init();
}
