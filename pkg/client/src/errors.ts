/** Typed errors so callers can branch on failure kind. */

export class OntosimClientError extends Error {}

/** Rejected client-side before any request was sent. */
export class ValidationError extends OntosimClientError {}

/** HTTP 400: the server rejected the request (e.g. unknown measure). */
export class BadRequestError extends OntosimClientError {
  constructor(message: string) {
    super(message);
    this.name = 'BadRequestError';
  }
}

/** HTTP 404: a concept id did not resolve; the message names it. */
export class NotFoundError extends OntosimClientError {
  constructor(message: string) {
    super(message);
    this.name = 'NotFoundError';
  }
}

/** HTTP 413: one request exceeded the server's batch limit. */
export class BatchTooLargeError extends OntosimClientError {
  constructor(message: string) {
    super(message);
    this.name = 'BatchTooLargeError';
  }
}

/** Any other non-2xx response. */
export class ServerError extends OntosimClientError {
  readonly status: number;
  constructor(status: number, message: string) {
    super(message);
    this.name = 'ServerError';
    this.status = status;
  }
}

/** Network failure that survived the retry budget. */
export class ConnectionFailedError extends OntosimClientError {
  constructor(message: string, readonly cause?: unknown) {
    super(message);
    this.name = 'ConnectionFailedError';
  }
}

export function errorForStatus(status: number, message: string): OntosimClientError {
  if (status === 400) return new BadRequestError(message);
  if (status === 404) return new NotFoundError(message);
  if (status === 413) return new BatchTooLargeError(message);
  return new ServerError(status, message);
}
