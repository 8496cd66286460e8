import { renameSync, writeFileSync } from 'fs';
import { DatasetRecord, Manifest } from './types.js';

/** One JSON line per record, matching the memechain dataset schema. */
export function toJsonLines(records: DatasetRecord[]): string {
  return records
    .map((record) => {
      const ordered: Record<string, unknown> = {
        id: record.id,
        group: record.group,
        origin: record.origin,
        image_embedding: record.image_embedding,
        text_embedding: record.text_embedding,
      };
      if (record.labels !== undefined) {
        ordered.labels = record.labels;
      }
      return JSON.stringify(ordered);
    })
    .join('\n') + (records.length ? '\n' : '');
}

/** Write via a temp file and rename, so readers never see a partial file. */
export function writeAtomically(path: string, content: string): void {
  const temp = `${path}.tmp-${process.pid}`;
  writeFileSync(temp, content, 'utf-8');
  renameSync(temp, path);
}

export function writeDataset(path: string, records: DatasetRecord[]): void {
  writeAtomically(path, toJsonLines(records));
}

export function writeManifest(path: string, manifest: Manifest): void {
  writeAtomically(path, JSON.stringify(manifest, null, 2) + '\n');
}
