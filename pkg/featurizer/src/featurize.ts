import { join } from 'path';
import { parseAnnotations, readTaxonomy } from './annotations.js';
import { DatasetRecord, Encoder, FeaturizeJob, Manifest, Translator } from './types.js';
import { writeDataset, writeManifest } from './writer.js';

export interface FeaturizeResult {
  records: DatasetRecord[];
  manifest: Manifest;
}

/**
 * One original record per annotated meme: id doubles as the group id, the
 * gold labels are carried through verbatim (after validation against the
 * taxonomy), and both embeddings come from the same encoder space.
 */
export async function embedOriginals(
  job: FeaturizeJob,
  encoder: Encoder,
): Promise<DatasetRecord[]> {
  const taxonomy = readTaxonomy(job.taxonomyPath);
  const annotations = parseAnnotations(job.annotationsPath);
  const records: DatasetRecord[] = [];
  for (const annotation of annotations) {
    for (const label of annotation.labels) {
      if (!taxonomy.has(label)) {
        throw new Error(`annotation ${annotation.id}: label ${JSON.stringify(label)} not in taxonomy`);
      }
    }
    records.push({
      id: annotation.id,
      group: annotation.id,
      origin: 'original',
      image_embedding: await encoder.embedImage(join(job.imagesDir, annotation.image)),
      text_embedding: await encoder.embedText(annotation.text),
      labels: annotation.labels,
    });
  }
  return records;
}

/**
 * Per original and per pivot, one paraphrase record sharing the group, the
 * gold labels and the image embedding verbatim; only the text is
 * re-encoded. A failed translation skips that record with a warning and
 * shows up in the manifest counts.
 */
export async function addParaphrases(
  originals: DatasetRecord[],
  annotationsText: Map<string, string>,
  translators: Translator[],
  encoder: Encoder,
  warn: (message: string) => void = (message) => console.warn(message),
): Promise<{ paraphrases: DatasetRecord[]; skipped: number }> {
  const paraphrases: DatasetRecord[] = [];
  let skipped = 0;
  for (const original of originals) {
    const text = annotationsText.get(original.id) ?? '';
    for (const translator of translators) {
      let rewritten: string;
      try {
        rewritten = await translator.paraphrase(text);
      } catch (err) {
        skipped += 1;
        warn(`skipping paraphrase ${original.id}/${translator.pivot}: ${(err as Error).message}`);
        continue;
      }
      paraphrases.push({
        id: `${original.id}-${translator.pivot}`,
        group: original.group,
        origin: 'paraphrase',
        image_embedding: original.image_embedding,
        text_embedding: await encoder.embedText(rewritten),
        labels: original.labels,
      });
    }
  }
  return { paraphrases, skipped };
}

export async function runJob(
  job: FeaturizeJob,
  encoder: Encoder,
  translators: Translator[],
  warn?: (message: string) => void,
): Promise<FeaturizeResult> {
  const originals = await embedOriginals(job, encoder);

  let paraphrases: DatasetRecord[] = [];
  let skipped = 0;
  if (job.paraphrase && translators.length > 0) {
    const texts = new Map(parseAnnotations(job.annotationsPath).map((a) => [a.id, a.text]));
    ({ paraphrases, skipped } = await addParaphrases(originals, texts, translators, encoder, warn));
  }

  // keep each group contiguous: the original first, then its paraphrases
  const byGroup = new Map<string, DatasetRecord[]>();
  for (const record of originals) {
    byGroup.set(record.group, [record]);
  }
  for (const record of paraphrases) {
    byGroup.get(record.group)!.push(record);
  }
  const records = [...byGroup.values()].flat();

  const manifest: Manifest = {
    encoder: encoder.name,
    translators: translators.map((t) => t.name),
    embedding_dim: encoder.dim,
    originals: originals.length,
    paraphrases_written: paraphrases.length,
    paraphrases_skipped: skipped,
    records_total: records.length,
  };
  writeDataset(job.outPath, records);
  writeManifest(job.manifestPath, manifest);
  return { records, manifest };
}
