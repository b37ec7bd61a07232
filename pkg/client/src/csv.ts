/**
 * Batch CSV reading/writing, byte-compatible with the engine's format:
 * header `centroid,candidate,measure,raw,rescaled`, floats at 12
 * significant digits, empty rescaled column when not computed.
 */

import { MeasureName, normalizeMeasure } from './measures.js';
import { ValidationError } from './errors.js';

export interface BatchRecord {
  centroid: string;
  candidate: string;
  measure: MeasureName;
  raw: number;
  rescaled: number | null;
}

export const BATCH_CSV_HEADER = 'centroid,candidate,measure,raw,rescaled';

/**
 * Serialize a float exactly like the engine's `%.12g` rule: 12
 * significant digits, trailing zeros trimmed, exponent form outside
 * [1e-4, 1e12), two-digit exponents, zero as "0".
 */
export function formatScore(value: number): string {
  if (value === 0) return '0';
  const [mantissa, expPart] = value.toExponential(11).split('e');
  const exp = parseInt(expPart, 10);
  if (exp < -4 || exp >= 12) {
    const sign = exp < 0 ? '-' : '+';
    const digits = Math.abs(exp).toString().padStart(2, '0');
    return `${trimTrailingZeros(mantissa)}e${sign}${digits}`;
  }
  return trimTrailingZeros(value.toFixed(11 - exp));
}

function trimTrailingZeros(text: string): string {
  if (!text.includes('.')) return text;
  return text.replace(/0+$/, '').replace(/\.$/, '');
}

function csvField(value: string): string {
  if (/[",\n\r]/.test(value)) {
    return `"${value.replace(/"/g, '""')}"`;
  }
  return value;
}

export function writeBatchCsv(records: readonly BatchRecord[]): string {
  const lines = [BATCH_CSV_HEADER];
  for (const r of records) {
    lines.push(
      [
        csvField(r.centroid),
        csvField(r.candidate),
        r.measure,
        formatScore(r.raw),
        r.rescaled === null ? '' : formatScore(r.rescaled),
      ].join(','),
    );
  }
  return lines.join('\n') + '\n';
}

export function parseBatchCsv(text: string): BatchRecord[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0] !== BATCH_CSV_HEADER) {
    throw new ValidationError(`batch CSV header must be ${BATCH_CSV_HEADER}`);
  }
  const records: BatchRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = splitCsvLine(lines[i]);
    if (fields.length !== 5) {
      throw new ValidationError(`batch CSV line ${i + 1}: expected 5 columns`);
    }
    const [centroid, candidate, measure, raw, rescaled] = fields;
    const rawValue = Number(raw);
    if (!Number.isFinite(rawValue)) {
      throw new ValidationError(`batch CSV line ${i + 1}: bad raw score ${raw}`);
    }
    records.push({
      centroid,
      candidate,
      measure: normalizeMeasure(measure),
      raw: rawValue,
      rescaled: rescaled === '' ? null : Number(rescaled),
    });
  }
  return records;
}

function splitCsvLine(line: string): string[] {
  const fields: string[] = [];
  let current = '';
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          current += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        current += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ',') {
      fields.push(current);
      current = '';
    } else {
      current += ch;
    }
  }
  fields.push(current);
  return fields;
}
