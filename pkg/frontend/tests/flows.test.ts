import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, CellEntry } from "../src/api";
import {
  averageWeight,
  enrollFlow,
  heatStrip,
  verifyFlow,
} from "../src/flows";
import { CaptureTrace } from "../src/trace";

function trace(n = 8): CaptureTrace {
  const points = [];
  for (let i = 0; i < n; i++) {
    points.push({ t: i * 10, x: i, y: n - i });
  }
  return { points, deviceHasPressure: false };
}

function cell(s: string, a: string, p: number, r: number, value: number): CellEntry {
  return { s, a, p, r, value };
}

function stubApi(overrides: Partial<ApiClient>): ApiClient {
  const api = new ApiClient("http://unused");
  return Object.assign(api, overrides);
}

describe("enrollFlow", () => {
  it("asks for more traces below five", async () => {
    const outcome = await enrollFlow(stubApi({}), "u", [trace(), trace()]);
    expect(outcome).toEqual({ kind: "need_more", have: 2, need: 5 });
  });

  it("reports success and no warning for healthy weights", async () => {
    const api = stubApi({
      enroll: async () => ({
        user_id: "u", K: 64, P: 2,
        weights: [cell("v", "x", 1, 1, 0.9), cell("v", "x", 1, 2, 0.7)],
        dmax: [],
      }),
    });
    const outcome = await enrollFlow(api, "u", Array(5).fill(trace()));
    expect(outcome.kind).toBe("enrolled");
    if (outcome.kind === "enrolled") expect(outcome.lowWeights).toBe(false);
  });

  it("warns when weights are uniformly low", async () => {
    const api = stubApi({
      enroll: async () => ({
        user_id: "u", K: 64, P: 2,
        weights: [cell("v", "x", 1, 1, 0.1), cell("v", "x", 1, 2, 0.0)],
        dmax: [],
      }),
    });
    const outcome = await enrollFlow(api, "u", Array(5).fill(trace()));
    if (outcome.kind !== "enrolled") throw new Error("expected enrolled");
    expect(outcome.lowWeights).toBe(true);
  });

  it("keeps traces on server errors", async () => {
    const api = stubApi({
      enroll: async () => {
        throw new ApiError(500, "boom");
      },
    });
    const outcome = await enrollFlow(api, "u", Array(5).fill(trace()));
    expect(outcome).toMatchObject({
      kind: "error", status: 500, tracesRetained: true,
    });
  });

  it("maps network failures to retained-trace errors too", async () => {
    const api = stubApi({
      enroll: async () => {
        throw new TypeError("fetch failed");
      },
    });
    const outcome = await enrollFlow(api, "u", Array(5).fill(trace()));
    expect(outcome).toMatchObject({ kind: "error", status: null });
  });
});

describe("verifyFlow", () => {
  it("returns the verdict for a known user", async () => {
    const api = stubApi({
      verify: async () => ({
        similarity: 0.8, genuine: true, threshold: 0.5, dtst: [],
      }),
    });
    const outcome = await verifyFlow(api, "u", trace());
    if (outcome.kind !== "verdict") throw new Error("expected verdict");
    expect(outcome.response.genuine).toBe(true);
  });

  it("sends shape_only for traces without device pressure", async () => {
    let seenMode = "";
    const api = stubApi({
      verify: async (_u, _s, mode) => {
        seenMode = mode ?? "";
        return { similarity: 0.1, genuine: false, threshold: 0.5, dtst: [] };
      },
    });
    await verifyFlow(api, "u", trace());
    expect(seenMode).toBe("shape_only");
  });

  it("maps 404 to an enroll prompt", async () => {
    const api = stubApi({
      verify: async () => {
        throw new ApiError(404, "unknown user u");
      },
    });
    expect(await verifyFlow(api, "u", trace())).toEqual({ kind: "enroll_first" });
  });

  it("surfaces other errors", async () => {
    const api = stubApi({
      verify: async () => {
        throw new ApiError(400, "bad trace");
      },
    });
    expect(await verifyFlow(api, "u", trace())).toMatchObject({
      kind: "error", status: 400,
    });
  });
});

describe("helpers", () => {
  it("averageWeight is the plain mean, 0 when empty", () => {
    expect(averageWeight([])).toBe(0);
    expect(averageWeight([cell("v", "x", 1, 1, 0.2), cell("v", "x", 1, 2, 0.6)]))
      .toBeCloseTo(0.4, 12);
  });

  it("heatStrip orders cells by signing phase first", () => {
    const strip = heatStrip([
      cell("z", "y", 2, 1, 0.3),
      cell("v", "x", 1, 2, 0.1),
      cell("v", "x", 2, 1, 0.2),
      cell("v", "x", 1, 1, 0.05),
    ]);
    expect(strip.map((s) => s.label)).toEqual([
      "v/x s1 b1", "v/x s1 b2", "v/x s2 b1", "z/y s2 b1",
    ]);
  });
});
