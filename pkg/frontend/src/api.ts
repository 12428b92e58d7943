// Thin typed client over the session API. Same origin; the server mounts
// the built UI under /ui so relative /api paths resolve correctly.

import type {
  ActResponse,
  HandRecord,
  SessionView,
  StrategiesResponse,
  StrategyTag,
  SweepResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function request<T>(method: string, path: string, body?: unknown): Promise<T> {
  const init: RequestInit = { method };
  if (body !== undefined) {
    init.headers = { 'Content-Type': 'application/json' };
    init.body = JSON.stringify(body);
  }
  const res = await fetch(path, init);
  if (!res.ok) {
    let detail = `HTTP ${res.status}`;
    try {
      const payload = await res.json();
      if (typeof payload.detail === 'string') detail = payload.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(res.status, detail);
  }
  return res.json() as Promise<T>;
}

export interface CreateSessionOptions {
  gamma: number;
  theta: number;
  seed?: number | null;
  mode?: string;
}

export const api = {
  createSession(opts: CreateSessionOptions): Promise<SessionView> {
    const body: Record<string, unknown> = {
      gamma: opts.gamma,
      theta: opts.theta,
    };
    if (opts.seed !== undefined && opts.seed !== null) body.seed = opts.seed;
    if (opts.mode !== undefined) body.mode = opts.mode;
    return request('POST', '/api/sessions', body);
  },

  getSession(id: string): Promise<SessionView> {
    return request('GET', `/api/sessions/${id}`);
  },

  setParams(id: string, gamma: number, theta: number): Promise<SessionView> {
    return request('PATCH', `/api/sessions/${id}/params`, { gamma, theta });
  },

  deal(id: string): Promise<SessionView> {
    return request('POST', `/api/sessions/${id}/deal`);
  },

  strategies(id: string): Promise<StrategiesResponse> {
    return request('GET', `/api/sessions/${id}/strategies`);
  },

  act(id: string, strategy: StrategyTag): Promise<ActResponse> {
    return request('POST', `/api/sessions/${id}/act`, { strategy });
  },

  history(id: string): Promise<HandRecord[]> {
    return request('GET', `/api/sessions/${id}/history`);
  },

  sweep(resolution: number): Promise<SweepResponse> {
    return request('GET', `/api/sweep?resolution=${resolution}`);
  },
};
