import assert from 'node:assert/strict';
import { test } from 'node:test';
import { spawnSync } from 'child_process';
import { join } from 'path';
import { HashEncoder } from '../src/encoders.js';
import { runJob } from '../src/featurize.js';
import { MockTranslator } from '../src/translators.js';
import { main } from '../src/cli.js';
import { makeFixture } from './helpers.js';

function primaryAvailable(): boolean {
  const probe = spawnSync('python3', ['-c', 'import memechain'], { encoding: 'utf-8' });
  return probe.status === 0;
}

test('cli writes dataset and manifest end to end', async () => {
  const { job } = makeFixture();
  const code = await main([
    '--annotations', job.annotationsPath,
    '--images', job.imagesDir,
    '--taxonomy', job.taxonomyPath,
    '--out', job.outPath,
    '--manifest', job.manifestPath,
    '--dim', '16',
  ]);
  assert.equal(code, 0);
});

test('cli reports usage errors without writing anything', async () => {
  assert.equal(await main(['--images', 'x']), 1);
  assert.equal(await main(['--unknown-flag']), 1);
});

test('output parses under the primary toolkit with zero errors', { skip: !primaryAvailable() }, async () => {
  const { dir, job } = makeFixture();
  await runJob(job, new HashEncoder(16), [new MockTranslator('de', 1), new MockTranslator('ru', 2)]);

  const stats = spawnSync(
    'python3',
    ['-m', 'memechain.cli', 'stats', '--taxonomy', job.taxonomyPath, '--data', job.outPath],
    { encoding: 'utf-8' },
  );
  assert.equal(stats.status, 0, stats.stderr);
  assert.match(stats.stdout, /examples = 9/);
  assert.match(stats.stdout, /groups = 3/);
  assert.match(stats.stdout, /count\[Smears\] = 1/);

  // and the full primary pipeline trains on featurized output
  const model = join(dir, 'model.json');
  const train = spawnSync(
    'python3',
    ['-m', 'memechain.cli', 'train', '--taxonomy', job.taxonomyPath,
     '--train', job.outPath, '--model', model, '--fraction', '0.34', '--max-iter', '30'],
    { encoding: 'utf-8' },
  );
  assert.equal(train.status, 0, train.stderr);
  assert.match(train.stdout, /validation_micro_f1/);
});
