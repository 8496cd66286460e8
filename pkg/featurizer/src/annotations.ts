import { readFileSync } from 'fs';
import { AnnotationRecord } from './types.js';

/**
 * Parse a subtask-3 style annotation file: a JSON array of objects with
 * id, text, image (file name) and labels (technique names).
 */
export function parseAnnotations(path: string): AnnotationRecord[] {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, 'utf-8'));
  } catch (err) {
    throw new Error(`cannot read annotations ${path}: ${(err as Error).message}`);
  }
  if (!Array.isArray(parsed)) {
    throw new Error(`annotations ${path}: expected a JSON array`);
  }
  const seen = new Set<string>();
  return parsed.map((item, index) => {
    if (typeof item !== 'object' || item === null) {
      throw new Error(`annotations ${path}[${index}]: not an object`);
    }
    const raw = item as Record<string, unknown>;
    const id = String(raw.id ?? '');
    if (!id) {
      throw new Error(`annotations ${path}[${index}]: missing id`);
    }
    if (seen.has(id)) {
      throw new Error(`annotations ${path}[${index}]: duplicate id ${id}`);
    }
    seen.add(id);
    if (typeof raw.text !== 'string') {
      throw new Error(`annotations ${path}[${index}]: missing text`);
    }
    if (typeof raw.image !== 'string' || !raw.image) {
      throw new Error(`annotations ${path}[${index}]: missing image file name`);
    }
    const labels = raw.labels ?? [];
    if (!Array.isArray(labels) || labels.some((l) => typeof l !== 'string')) {
      throw new Error(`annotations ${path}[${index}]: labels must be strings`);
    }
    return { id, text: raw.text, image: raw.image, labels: labels as string[] };
  });
}

export function readTaxonomy(path: string): Set<string> {
  const names = readFileSync(path, 'utf-8')
    .split('\n')
    .map((line) => line.trimEnd())
    .filter((line) => line.length > 0);
  if (names.length === 0) {
    throw new Error(`taxonomy ${path}: no labels`);
  }
  return new Set(names);
}
