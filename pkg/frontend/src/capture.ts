// Canvas signature pad: pointerdown..pointerup sampling at device rate
// with live rendering. Pressure is passed through when the device
// reports it; the wire-format fallback happens in trace.ts.

import { CaptureTrace, TraceRecorder } from "./trace";

export class SignaturePad {
  private recorder = new TraceRecorder();
  private drawing = false;
  private ctx: CanvasRenderingContext2D;
  private lastX = 0;
  private lastY = 0;
  enabled = true;
  onTrace: (trace: CaptureTrace) => void = () => {};
  onDiscard: () => void = () => {};

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas context unavailable");
    this.ctx = ctx;
    this.ctx.lineWidth = 2;
    this.ctx.lineCap = "round";
    this.ctx.strokeStyle = "#1a3a6b";
    canvas.addEventListener("pointerdown", (e) => this.start(e));
    canvas.addEventListener("pointermove", (e) => this.move(e));
    canvas.addEventListener("pointerup", (e) => this.end(e));
    canvas.addEventListener("pointercancel", () => this.cancel());
  }

  clear(): void {
    this.ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
  }

  private local(e: PointerEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    return [e.clientX - rect.left, e.clientY - rect.top];
  }

  private start(e: PointerEvent): void {
    if (!this.enabled) return;
    this.drawing = true;
    this.canvas.setPointerCapture(e.pointerId);
    this.recorder.reset();
    const [x, y] = this.local(e);
    this.recorder.addSample(e.timeStamp, x, y, e.pressure);
    this.lastX = x;
    this.lastY = y;
  }

  private move(e: PointerEvent): void {
    if (!this.drawing) return;
    const [x, y] = this.local(e);
    this.recorder.addSample(e.timeStamp, x, y, e.pressure);
    this.ctx.beginPath();
    this.ctx.moveTo(this.lastX, this.lastY);
    this.ctx.lineTo(x, y);
    this.ctx.stroke();
    this.lastX = x;
    this.lastY = y;
  }

  private end(e: PointerEvent): void {
    if (!this.drawing) return;
    this.drawing = false;
    const [x, y] = this.local(e);
    this.recorder.addSample(e.timeStamp, x, y, e.pressure);
    const trace = this.recorder.finish();
    if (trace === null) {
      this.onDiscard();
    } else {
      this.onTrace(trace);
    }
    this.recorder.reset();
  }

  private cancel(): void {
    this.drawing = false;
    this.recorder.reset();
  }
}
