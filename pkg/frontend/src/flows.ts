// Enrollment and verification flows, kept free of DOM concerns so the
// decision logic is unit-testable. main.ts renders the outcomes.

import { ApiClient, ApiError, CellEntry, EnrollResponse, VerifyResponse } from "./api";
import { CaptureTrace, toSignaturePayload, verificationMode } from "./trace";

export const REQUIRED_TRACES = 5;

// below this average weight the references were probably inconsistent
export const LOW_WEIGHT_WARNING = 0.25;

export type EnrollOutcome =
  | { kind: "enrolled"; response: EnrollResponse; lowWeights: boolean }
  | { kind: "need_more"; have: number; need: number }
  | { kind: "error"; status: number | null; message: string; tracesRetained: true };

export type VerifyOutcome =
  | { kind: "verdict"; response: VerifyResponse }
  | { kind: "enroll_first" }
  | { kind: "error"; status: number | null; message: string };

export function averageWeight(weights: CellEntry[]): number {
  if (weights.length === 0) return 0;
  return weights.reduce((acc, w) => acc + w.value, 0) / weights.length;
}

export async function enrollFlow(
  api: ApiClient,
  userId: string,
  traces: CaptureTrace[],
): Promise<EnrollOutcome> {
  if (traces.length < REQUIRED_TRACES) {
    return { kind: "need_more", have: traces.length, need: REQUIRED_TRACES };
  }
  try {
    const response = await api.enroll(userId, traces.map(toSignaturePayload));
    return {
      kind: "enrolled",
      response,
      lowWeights: averageWeight(response.weights) < LOW_WEIGHT_WARNING,
    };
  } catch (err) {
    if (err instanceof ApiError) {
      return { kind: "error", status: err.status, message: err.message, tracesRetained: true };
    }
    return { kind: "error", status: null, message: String(err), tracesRetained: true };
  }
}

export async function verifyFlow(
  api: ApiClient,
  userId: string,
  probe: CaptureTrace,
): Promise<VerifyOutcome> {
  try {
    const response = await api.verify(
      userId,
      toSignaturePayload(probe),
      verificationMode([probe]),
    );
    return { kind: "verdict", response };
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      return { kind: "enroll_first" };
    }
    if (err instanceof ApiError) {
      return { kind: "error", status: err.status, message: err.message };
    }
    return { kind: "error", status: null, message: String(err) };
  }
}

/** Per-cell values ordered by signing phase (time section) for the heat strip. */
export function heatStrip(dtst: CellEntry[]): { label: string; value: number }[] {
  return [...dtst]
    .sort((a, b) => a.p - b.p || a.s.localeCompare(b.s) || a.a.localeCompare(b.a) || a.r - b.r)
    .map((c) => ({ label: `${c.s}/${c.a} s${c.p} b${c.r}`, value: c.value }));
}
