import { parseArgs } from 'util';
import { pathToFileURL } from 'url';
import { makeEncoder } from './encoders.js';
import { DEFAULT_PIVOTS, makeTranslators } from './translators.js';
import { FeaturizeJob } from './types.js';
import { runJob } from './featurize.js';

const USAGE = `usage: featurize --annotations FILE --images DIR --taxonomy FILE \\
                 --out FILE --manifest FILE [options]

options:
  --encoder hash | clip:<model id>   embedding backend (default hash)
  --translator mock | marian         paraphrase backend (default mock)
  --pivots de,ru                     pivot languages (default de,ru)
  --dim 64                           hash encoder width
  --batch-size 8                     batch size for real encoders
  --device cpu                       device for real encoders
  --no-paraphrase                    emit originals only
`;

export async function main(argv: string[]): Promise<number> {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        annotations: { type: 'string' },
        images: { type: 'string' },
        taxonomy: { type: 'string' },
        out: { type: 'string' },
        manifest: { type: 'string' },
        encoder: { type: 'string', default: 'hash' },
        translator: { type: 'string', default: 'mock' },
        pivots: { type: 'string', default: DEFAULT_PIVOTS.join(',') },
        dim: { type: 'string', default: '64' },
        'batch-size': { type: 'string', default: '8' },
        device: { type: 'string', default: 'cpu' },
        'no-paraphrase': { type: 'boolean', default: false },
        help: { type: 'boolean', default: false },
      },
    }));
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 1;
  }
  if (values.help) {
    console.log(USAGE);
    return 0;
  }
  for (const key of ['annotations', 'images', 'taxonomy', 'out', 'manifest'] as const) {
    if (!values[key]) {
      console.error(`usage error: missing --${key}\n\n${USAGE}`);
      return 1;
    }
  }

  const job: FeaturizeJob = {
    annotationsPath: values.annotations!,
    imagesDir: values.images!,
    taxonomyPath: values.taxonomy!,
    outPath: values.out!,
    manifestPath: values.manifest!,
    encoder: values.encoder!,
    pivots: values.pivots!.split(',').map((p) => p.trim()).filter(Boolean),
    batchSize: Number(values['batch-size']),
    device: values.device!,
    paraphrase: !values['no-paraphrase'],
    embeddingDim: Number(values.dim),
  };

  try {
    const encoder = await makeEncoder(job.encoder, job.embeddingDim, job.device);
    const translators = job.paraphrase
      ? await makeTranslators(values.translator!, job.pivots, job.device)
      : [];
    const { manifest } = await runJob(job, encoder, translators);
    console.log(
      `wrote ${manifest.records_total} records ` +
      `(${manifest.originals} originals, ${manifest.paraphrases_written} paraphrases, ` +
      `${manifest.paraphrases_skipped} skipped) to ${job.outPath}`
    );
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
