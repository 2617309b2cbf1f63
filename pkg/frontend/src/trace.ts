// Capture traces and their conversion to the service wire format.
// All geometry normalization happens server-side; the client sends raw
// canvas coordinates so rendering scale cannot bias the result.

export interface TracePoint {
  t: number; // ms from stroke start
  x: number; // css pixels
  y: number; // css pixels
  p?: number; // pointer pressure in [0,1] when the device reports it
}

export interface CaptureTrace {
  points: TracePoint[];
  deviceHasPressure: boolean;
}

export interface SignaturePayload {
  samples: { t: number; x: number; y: number; p: number }[];
  meta: Record<string, unknown>;
}

export const PRESSURE_FALLBACK = 0.5;
export const MIN_POINTS = 2;

export class TraceError extends Error {}

/** Accumulates pointer samples for one stroke. */
export class TraceRecorder {
  private points: TracePoint[] = [];
  private startedAt: number | null = null;
  private sawPressure = false;

  addSample(timestampMs: number, x: number, y: number, pressure?: number): void {
    if (this.startedAt === null) {
      this.startedAt = timestampMs;
    }
    let t = timestampMs - this.startedAt;
    const last = this.points[this.points.length - 1];
    if (last !== undefined && t <= last.t) {
      // some devices batch events onto one timestamp; nudge to keep
      // timestamps strictly monotone as the service requires
      t = last.t + 1;
    }
    const point: TracePoint = { t, x, y };
    if (pressure !== undefined && pressure > 0 && pressure !== PRESSURE_FALLBACK) {
      this.sawPressure = true;
    }
    if (pressure !== undefined && pressure > 0) {
      point.p = Math.min(1, Math.max(0, pressure));
    }
    this.points.push(point);
  }

  /** Returns the finished trace, or null when too short to accept. */
  finish(): CaptureTrace | null {
    if (this.points.length < MIN_POINTS) {
      return null;
    }
    return { points: this.points, deviceHasPressure: this.sawPressure };
  }

  reset(): void {
    this.points = [];
    this.startedAt = null;
    this.sawPressure = false;
  }
}

export function validateTrace(trace: CaptureTrace): void {
  if (trace.points.length < MIN_POINTS) {
    throw new TraceError(`trace needs at least ${MIN_POINTS} points`);
  }
  for (let i = 1; i < trace.points.length; i++) {
    if (trace.points[i].t <= trace.points[i - 1].t) {
      throw new TraceError(`non-monotone timestamp at index ${i}`);
    }
  }
}

/** Wire format for the service; missing pressure becomes the 0.5 fallback. */
export function toSignaturePayload(trace: CaptureTrace): SignaturePayload {
  validateTrace(trace);
  return {
    samples: trace.points.map((pt) => ({
      t: pt.t,
      x: pt.x,
      y: pt.y,
      p: pt.p ?? PRESSURE_FALLBACK,
    })),
    meta: { device_has_pressure: trace.deviceHasPressure },
  };
}

/** shape_only when any enrolled or probe trace lacked real pressure. */
export function verificationMode(traces: CaptureTrace[]): "full" | "shape_only" {
  return traces.every((tr) => tr.deviceHasPressure) ? "full" : "shape_only";
}
