import { mkdtempSync, mkdirSync, writeFileSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { FeaturizeJob } from '../src/types.js';

export const TAXONOMY = ['Smears', 'Loaded Language', 'Doubt'];

export interface Fixture {
  dir: string;
  job: FeaturizeJob;
}

/** A tiny annotation set with images on disk, ready to featurize. */
export function makeFixture(overrides: Partial<FeaturizeJob> = {}): Fixture {
  const dir = mkdtempSync(join(tmpdir(), 'featurizer-'));
  const imagesDir = join(dir, 'images');
  mkdirSync(imagesDir);
  writeFileSync(join(imagesDir, '10.png'), Buffer.from('fake png bytes #10'));
  writeFileSync(join(imagesDir, '11.png'), Buffer.from('fake png bytes #11'));
  writeFileSync(join(imagesDir, '12.png'), Buffer.from('fake png bytes #12'));

  const annotations = [
    { id: '10', text: 'the usual suspects strike again', image: '10.png', labels: ['Smears'] },
    { id: '11', text: 'nothing ever changes around here', image: '11.png',
      labels: ['Loaded Language', 'Doubt'] },
    { id: '12', text: 'a meme with no listed technique', image: '12.png', labels: [] },
  ];
  writeFileSync(join(dir, 'annotations.json'), JSON.stringify(annotations, null, 2));
  writeFileSync(join(dir, 'taxonomy.txt'), TAXONOMY.join('\n') + '\n');

  const job: FeaturizeJob = {
    annotationsPath: join(dir, 'annotations.json'),
    imagesDir,
    taxonomyPath: join(dir, 'taxonomy.txt'),
    outPath: join(dir, 'dataset.jsonl'),
    manifestPath: join(dir, 'manifest.json'),
    encoder: 'hash',
    pivots: ['de', 'ru'],
    batchSize: 8,
    device: 'cpu',
    paraphrase: true,
    embeddingDim: 16,
    ...overrides,
  };
  return { dir, job };
}
