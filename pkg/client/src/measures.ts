import { ValidationError } from './errors.js';

/** The engine's closed measure set, in its fixed evaluation order. */
export const MEASURES = [
  'LCH',
  'WUPALMER',
  'INTRINSIC_RESNIK',
  'INTRINSIC_LIN',
  'INTRINSIC_LCH',
  'SOKAL',
] as const;

export type MeasureName = (typeof MEASURES)[number];

const ALIASES: Record<string, MeasureName> = {
  LIN: 'INTRINSIC_LIN',
  RESNIK: 'INTRINSIC_RESNIK',
};

/**
 * Case-insensitive measure lookup, matching the server's parser, so bad
 * names fail before any request goes out.
 */
export function normalizeMeasure(name: string): MeasureName {
  const key = name.trim().toUpperCase();
  if ((MEASURES as readonly string[]).includes(key)) return key as MeasureName;
  const alias = ALIASES[key];
  if (alias) return alias;
  throw new ValidationError(`unknown measure: ${name}`);
}
