// Thin fetch client for the verification service JSON API.
// The UI never computes verification locally; every decision comes from
// the server.

import { SignaturePayload } from "./trace";

export interface CellEntry {
  s: string;
  a: string;
  p: number;
  r: number;
  value: number;
}

export interface EnrollResponse {
  user_id: string;
  K: number;
  P: number;
  weights: CellEntry[];
  dmax: CellEntry[];
}

export interface VerifyResponse {
  similarity: number;
  genuine: boolean;
  threshold: number;
  dtst: CellEntry[];
}

export interface ProfileResponse {
  user_id: string;
  K: number;
  P: number;
  cth: number;
  delta: number;
  mu_min: number;
  weights: CellEntry[];
}

export interface EnrollParams {
  P?: number;
  delta?: number;
  mu_min?: number;
  cth?: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function expectJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  private post(path: string, body: unknown): Promise<Response> {
    return this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async enroll(
    userId: string,
    signatures: SignaturePayload[],
    params: EnrollParams = {},
  ): Promise<EnrollResponse> {
    const resp = await this.post(`/users/${encodeURIComponent(userId)}/enroll`, {
      signatures,
      ...params,
    });
    return expectJson<EnrollResponse>(resp);
  }

  async verify(
    userId: string,
    signature: SignaturePayload,
    mode: "full" | "shape_only" = "full",
  ): Promise<VerifyResponse> {
    const resp = await this.post(`/users/${encodeURIComponent(userId)}/verify`, {
      signature,
      mode,
    });
    return expectJson<VerifyResponse>(resp);
  }

  async profile(userId: string): Promise<ProfileResponse> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/users/${encodeURIComponent(userId)}/profile`,
    );
    return expectJson<ProfileResponse>(resp);
  }

  async echo(signature: SignaturePayload): Promise<SignaturePayload> {
    const resp = await this.post("/echo", signature);
    return expectJson<SignaturePayload>(resp);
  }
}
