export {
  ClientSession,
  batch,
  health,
  neighbors,
  similarity,
} from './client.js';
export type { HealthInfo, Neighbor, SessionOptions } from './client.js';
export {
  BATCH_CSV_HEADER,
  formatScore,
  parseBatchCsv,
  writeBatchCsv,
} from './csv.js';
export type { BatchRecord } from './csv.js';
export {
  BadRequestError,
  BatchTooLargeError,
  ConnectionFailedError,
  NotFoundError,
  OntosimClientError,
  ServerError,
  ValidationError,
} from './errors.js';
export { MEASURES, normalizeMeasure } from './measures.js';
export type { MeasureName } from './measures.js';
