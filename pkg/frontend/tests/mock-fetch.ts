// Ordered fetch replay. Each test queues the exchanges it expects; any
// deviation in order, method, path or body fails the test.

import { expect, vi } from 'vitest';

export interface Exchange {
  method: string;
  path: string;
  status?: number;
  json?: unknown;
  body?: unknown;
  networkError?: boolean;
}

export interface FetchLog {
  calls: Array<{ method: string; path: string; body?: unknown }>;
  remaining: () => number;
}

export function installFetchQueue(exchanges: Exchange[]): FetchLog {
  const queue = [...exchanges];
  const calls: FetchLog['calls'] = [];
  vi.stubGlobal(
    'fetch',
    vi.fn(async (path: string, init?: RequestInit) => {
      const method = init?.method ?? 'GET';
      const body = init?.body !== undefined ? JSON.parse(String(init.body)) : undefined;
      calls.push({ method, path, body });
      const next = queue.shift();
      if (!next) throw new Error(`unexpected request: ${method} ${path}`);
      expect(`${method} ${path}`).toBe(`${next.method} ${next.path}`);
      if (next.body !== undefined) expect(body).toEqual(next.body);
      if (next.networkError) throw new TypeError('fetch failed');
      return new Response(JSON.stringify(next.json ?? null), {
        status: next.status ?? 200,
        headers: { 'Content-Type': 'application/json' },
      });
    })
  );
  return { calls, remaining: () => queue.length };
}
