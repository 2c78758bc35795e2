/**
 * embed-proteins: dataset file in, embedding file out.
 *
 *   embed-proteins <dataset> <out> [--layer 36] [--pool mean] [--report path]
 *
 * Records whose protein sequence contains residues outside the vocabulary
 * fail individually and are listed in the sidecar report (default
 * `<out>.report.txt`); the remaining records still embed.
 */

import { parseArgs } from 'node:util';
import { readFileSync, writeFileSync } from 'node:fs';

import { parseDataset, DatasetError } from './dataset.js';
import {
  EMBEDDING_DIM,
  MODEL_ID,
  NUM_LAYERS,
  Pooling,
  ResidueEncoder,
  UnknownResidueError,
} from './encoder.js';
import { formatEmbeddingFile } from './embeddingFile.js';

export interface RunResult {
  embedded: number;
  failed: number;
}

export function run(argv: string[]): RunResult {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      layer: { type: 'string', default: String(NUM_LAYERS) },
      pool: { type: 'string', default: 'mean' },
      report: { type: 'string' },
    },
  });
  if (positionals.length !== 2) {
    throw new Error('usage: embed-proteins <dataset> <out> [--layer N] [--pool mean|cls] [--report path]');
  }
  const [datasetPath, outPath] = positionals;
  const layer = Number(values.layer);
  if (!Number.isInteger(layer)) {
    throw new Error(`--layer must be an integer, got ${JSON.stringify(values.layer)}`);
  }
  const pool = values.pool as Pooling;
  if (pool !== 'mean' && pool !== 'cls') {
    throw new Error(`--pool must be 'mean' or 'cls', got ${JSON.stringify(values.pool)}`);
  }
  const reportPath = values.report ?? `${outPath}.report.txt`;

  const records = parseDataset(readFileSync(datasetPath, 'utf-8'));
  const encoder = new ResidueEncoder({ layer });
  const rows: [string, Float64Array][] = [];
  const failures: string[] = [];
  const bySequence = new Map<string, Float64Array>();
  for (const record of records) {
    try {
      let vector = bySequence.get(record.proteinSequence);
      if (vector === undefined) {
        vector = encoder.embed(record.proteinSequence, pool);
        bySequence.set(record.proteinSequence, vector);
      }
      rows.push([record.id, vector]);
    } catch (err) {
      if (err instanceof UnknownResidueError) {
        failures.push(`${record.id}\t${err.message}`);
      } else {
        throw err;
      }
    }
  }

  const text = formatEmbeddingFile(rows, {
    dim: EMBEDDING_DIM,
    comments: [`model=${MODEL_ID}`, `layer=${layer}`, `pool=${pool}`],
  });
  writeFileSync(outPath, text, 'utf-8');
  writeFileSync(
    reportPath,
    failures.length ? failures.join('\n') + '\n' : 'all records embedded\n',
    'utf-8',
  );
  return { embedded: rows.length, failed: failures.length };
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop() ?? '');

if (invokedDirectly) {
  try {
    const result = run(process.argv.slice(2));
    console.log(`embedded ${result.embedded} record(s), ${result.failed} failure(s)`);
    process.exitCode = 0;
  } catch (err) {
    console.error(`error: ${err instanceof DatasetError ? err.message : err}`);
    process.exitCode = 1;
  }
}
