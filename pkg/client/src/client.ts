/**
 * Thin synchronous-style client for the similarity service. One session
 * per caller; no shared mutable state beyond the request counter.
 *
 * Idempotent GETs are retried on network failures and 5xx responses up
 * to `maxRetries` extra attempts; POST /batch is never retried. Large
 * batches are split client-side into chunks no bigger than the server's
 * limit, preserving overall record order; each chunk is atomic on the
 * server, so a failing chunk leaves earlier chunks' results in the
 * thrown-away partial (documented: callers resubmit the whole batch).
 */

import { BatchRecord } from './csv.js';
import {
  ConnectionFailedError,
  ValidationError,
  errorForStatus,
} from './errors.js';
import { MeasureName, normalizeMeasure } from './measures.js';

export interface SessionOptions {
  baseUrl: string;
  /** Per-request timeout; must be positive. Default 30. */
  timeoutSeconds?: number;
  /** Extra attempts for idempotent GETs. Default 2. */
  maxRetries?: number;
  /** Client-side chunk size for /batch; match the server. Default 10000. */
  batchLimit?: number;
}

export interface HealthInfo {
  status: string;
  conceptCount: number;
  maxDepth: number;
  maxIc: number;
  indexVersion: string;
}

export interface Neighbor {
  id: string;
  score: number;
}

export class ClientSession {
  readonly baseUrl: string;
  readonly timeoutSeconds: number;
  readonly maxRetries: number;
  readonly batchLimit: number;
  /** HTTP requests actually sent; handy for chunking assertions. */
  requestCount = 0;

  constructor(options: SessionOptions) {
    if (!options.baseUrl) throw new ValidationError('baseUrl must be non-empty');
    const timeout = options.timeoutSeconds ?? 30;
    if (timeout <= 0) throw new ValidationError('timeoutSeconds must be > 0');
    this.baseUrl = options.baseUrl.replace(/\/$/, '');
    this.timeoutSeconds = timeout;
    this.maxRetries = options.maxRetries ?? 2;
    this.batchLimit = options.batchLimit ?? 10000;
  }
}

async function readError(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string };
    if (body && typeof body.error === 'string') return body.error;
  } catch {
    // fall through to the status line
  }
  return `HTTP ${response.status}`;
}

async function requestJson<T>(
  session: ClientSession,
  method: 'GET' | 'POST',
  path: string,
  body?: unknown,
): Promise<T> {
  const url = `${session.baseUrl}${path}`;
  const attempts = method === 'GET' ? 1 + session.maxRetries : 1;
  let lastFailure: unknown;
  for (let attempt = 0; attempt < attempts; attempt++) {
    if (attempt > 0) {
      await new Promise((resolve) => setTimeout(resolve, 100 * attempt));
    }
    let response: Response;
    try {
      session.requestCount++;
      response = await fetch(url, {
        method,
        headers: body === undefined ? undefined : { 'content-type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
        signal: AbortSignal.timeout(session.timeoutSeconds * 1000),
      });
    } catch (cause) {
      lastFailure = cause;
      continue; // network-level failure: retry if attempts remain
    }
    if (response.ok) {
      return (await response.json()) as T;
    }
    if (response.status >= 500 && method === 'GET' && attempt < attempts - 1) {
      lastFailure = new Error(`HTTP ${response.status}`);
      continue;
    }
    throw errorForStatus(response.status, await readError(response));
  }
  throw new ConnectionFailedError(
    `request to ${url} failed after ${attempts} attempt(s)`,
    lastFailure,
  );
}

export async function health(session: ClientSession): Promise<HealthInfo> {
  return requestJson<HealthInfo>(session, 'GET', '/health');
}

/** Score one concept pair under one measure. */
export async function similarity(
  session: ClientSession,
  measure: string,
  c1: string,
  c2: string,
): Promise<number> {
  const m = normalizeMeasure(measure); // fails before any request
  const params = new URLSearchParams({ m, c1, c2 });
  const body = await requestJson<{ score: number }>(
    session,
    'GET',
    `/similarity?${params}`,
  );
  return body.score;
}

/**
 * Score many pairs under many measures. Record order is pair order
 * crossed with the engine's fixed measure order, exactly as the server
 * returns it; chunking never reorders. Empty input sends nothing.
 */
export async function batch(
  session: ClientSession,
  measures: readonly string[],
  pairs: readonly [string, string][],
): Promise<BatchRecord[]> {
  if (measures.length === 0) throw new ValidationError('no measures given');
  const normalized = measures.map(normalizeMeasure);
  if (pairs.length === 0) return [];
  const records: BatchRecord[] = [];
  for (let start = 0; start < pairs.length; start += session.batchLimit) {
    const chunk = pairs.slice(start, start + session.batchLimit);
    const body = await requestJson<{
      records: { c1: string; c2: string; measure: MeasureName; score: number }[];
    }>(session, 'POST', '/batch', { measures: normalized, pairs: chunk });
    for (const r of body.records) {
      records.push({
        centroid: r.c1,
        candidate: r.c2,
        measure: r.measure,
        raw: r.score,
        rescaled: null,
      });
    }
  }
  return records;
}

/** Top-k concepts ranked by similarity to `c` (descending, ties by id). */
export async function neighbors(
  session: ClientSession,
  measure: string,
  c: string,
  k: number,
): Promise<Neighbor[]> {
  const m = normalizeMeasure(measure);
  if (!Number.isInteger(k) || k < 1) {
    throw new ValidationError('k must be a positive integer');
  }
  const params = new URLSearchParams({ m, c, k: String(k) });
  const body = await requestJson<{ neighbors: Neighbor[] }>(
    session,
    'GET',
    `/neighbors?${params}`,
  );
  return body.neighbors;
}
