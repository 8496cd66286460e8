import assert from 'node:assert/strict';
import { test } from 'node:test';
import { existsSync, readFileSync, writeFileSync } from 'fs';
import { join } from 'path';
import { HashEncoder } from '../src/encoders.js';
import { runJob } from '../src/featurize.js';
import { MockTranslator } from '../src/translators.js';
import { DatasetRecord } from '../src/types.js';
import { makeFixture } from './helpers.js';

function mockTranslators() {
  return [new MockTranslator('de', 1), new MockTranslator('ru', 2)];
}

function readRecords(path: string): DatasetRecord[] {
  return readFileSync(path, 'utf-8')
    .split('\n')
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line));
}

test('originals only: one record per meme, group = id', async () => {
  const { job } = makeFixture({ paraphrase: false });
  const { records, manifest } = await runJob(job, new HashEncoder(16), []);
  assert.equal(records.length, 3);
  for (const record of records) {
    assert.equal(record.origin, 'original');
    assert.equal(record.group, record.id);
    assert.equal(record.image_embedding.length, 16);
    assert.equal(record.text_embedding.length, 16);
  }
  assert.deepEqual(records[0].labels, ['Smears']);
  assert.deepEqual(records[2].labels, []);
  assert.equal(manifest.originals, 3);
  assert.equal(manifest.records_total, 3);
});

test('two pivots give groups of exactly three members', async () => {
  const { job } = makeFixture();
  const { records, manifest } = await runJob(job, new HashEncoder(16), mockTranslators());
  assert.equal(manifest.paraphrases_written, 6);
  assert.equal(manifest.paraphrases_skipped, 0);
  const groups = new Map<string, DatasetRecord[]>();
  for (const record of records) {
    groups.set(record.group, [...(groups.get(record.group) ?? []), record]);
  }
  assert.equal(groups.size, 3);
  for (const members of groups.values()) {
    assert.equal(members.length, 3);
    assert.equal(members.filter((m) => m.origin === 'original').length, 1);
  }
});

test('paraphrases share image embedding and gold labels, not text', async () => {
  const { job } = makeFixture();
  const { records } = await runJob(job, new HashEncoder(16), mockTranslators());
  const original = records.find((r) => r.id === '11')!;
  const paraphrases = records.filter((r) => r.group === '11' && r.origin === 'paraphrase');
  assert.equal(paraphrases.length, 2);
  for (const paraphrase of paraphrases) {
    assert.deepEqual(paraphrase.image_embedding, original.image_embedding);
    assert.deepEqual(paraphrase.labels, original.labels);
    assert.notDeepEqual(paraphrase.text_embedding, original.text_embedding);
  }
  // distinct pivots rewrite differently, so their embeddings differ too
  assert.notDeepEqual(paraphrases[0].text_embedding, paraphrases[1].text_embedding);
});

test('untranslatable text skips the record with a warning, never silently', async () => {
  const { dir, job } = makeFixture();
  const annotations = JSON.parse(readFileSync(job.annotationsPath, 'utf-8'));
  annotations[0].text = '   ';
  writeFileSync(job.annotationsPath, JSON.stringify(annotations));
  const warnings: string[] = [];
  const { records, manifest } = await runJob(
    job, new HashEncoder(16), mockTranslators(), (message) => warnings.push(message),
  );
  assert.equal(manifest.paraphrases_skipped, 2);
  assert.equal(manifest.paraphrases_written, 4);
  assert.equal(manifest.records_total, 7);
  assert.equal(warnings.length, 2);
  assert.match(warnings[0], /skipping paraphrase 10\/de/);
  assert.equal(records.filter((r) => r.group === '10').length, 1);
  assert.ok(existsSync(join(dir, 'manifest.json')));
});

test('unknown label names are an error', async () => {
  const { job } = makeFixture();
  const annotations = JSON.parse(readFileSync(job.annotationsPath, 'utf-8'));
  annotations[1].labels = ['Not A Technique'];
  writeFileSync(job.annotationsPath, JSON.stringify(annotations));
  await assert.rejects(
    runJob(job, new HashEncoder(16), mockTranslators()),
    /label "Not A Technique" not in taxonomy/,
  );
});

test('missing image file is an error', async () => {
  const { job } = makeFixture();
  const annotations = JSON.parse(readFileSync(job.annotationsPath, 'utf-8'));
  annotations[0].image = 'gone.png';
  writeFileSync(job.annotationsPath, JSON.stringify(annotations));
  await assert.rejects(runJob(job, new HashEncoder(16), []), /missing image/);
});

test('manifest records the encoder, translators and dimension', async () => {
  const { job } = makeFixture();
  await runJob(job, new HashEncoder(16), mockTranslators());
  const manifest = JSON.parse(readFileSync(job.manifestPath, 'utf-8'));
  assert.equal(manifest.encoder, 'hash-16');
  assert.deepEqual(manifest.translators, ['mock-de', 'mock-ru']);
  assert.equal(manifest.embedding_dim, 16);
});

test('dataset file embedding width is constant across all records', async () => {
  const { job } = makeFixture();
  await runJob(job, new HashEncoder(24), mockTranslators());
  const records = readRecords(job.outPath);
  assert.equal(records.length, 9);
  for (const record of records) {
    assert.equal(record.image_embedding.length, 24);
    assert.equal(record.text_embedding.length, 24);
  }
});
