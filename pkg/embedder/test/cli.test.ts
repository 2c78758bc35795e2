import { mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { describe, expect, it } from 'vitest';

import { parseEmbeddingFile } from '../src/embeddingFile.js';
import { run } from '../src/main.js';

const HEADER = 'id,na_sequence,protein_sequence,label,label_unit';

function writeDataset(rows: string[]): { dir: string; dataset: string; out: string } {
  const dir = mkdtempSync(join(tmpdir(), 'embedder-'));
  const dataset = join(dir, 'data.csv');
  writeFileSync(dataset, [HEADER, ...rows].join('\n') + '\n', 'utf-8');
  return { dir, dataset, out: join(dir, 'emb.csv') };
}

describe('embed-proteins', () => {
  it('writes 2560-wide rows with the flags in the header comments', () => {
    const { dataset, out } = writeDataset(['P1,ACGTT,MKV,1.0,pkd']);
    const result = run([dataset, out, '--layer', '2']);
    expect(result).toEqual({ embedded: 1, failed: 0 });
    const text = readFileSync(out, 'utf-8');
    expect(text).toContain('# layer=2');
    expect(text).toContain('# pool=mean');
    const { dim, vectors } = parseEmbeddingFile(text);
    expect(dim).toBe(2560);
    expect(vectors.get('P1')!.length).toBe(2560);
  });

  it('is deterministic across reruns', () => {
    const { dataset, out, dir } = writeDataset(['P1,ACGTT,MKVLILACLVA,1.0,pkd']);
    run([dataset, out, '--layer', '3']);
    const first = readFileSync(out, 'utf-8');
    const out2 = join(dir, 'emb2.csv');
    run([dataset, out2, '--layer', '3']);
    expect(readFileSync(out2, 'utf-8')).toBe(first);
  });

  it('gives duplicate proteins identical vectors', () => {
    const { dataset, out } = writeDataset([
      'P1,ACGTT,MKVLILACLVA,1.0,pkd',
      'P2,AAGTT,MKVLILACLVA,2.0,pkd',
    ]);
    run([dataset, out, '--layer', '2']);
    const { vectors } = parseEmbeddingFile(readFileSync(out, 'utf-8'));
    expect(Array.from(vectors.get('P1')!)).toEqual(Array.from(vectors.get('P2')!));
  });

  it('round-trips exactly through the file format', () => {
    const { dataset, out } = writeDataset(['P1,ACGTT,MKWYE,1.0,pkd']);
    run([dataset, out, '--layer', '2']);
    const text = readFileSync(out, 'utf-8');
    const { vectors } = parseEmbeddingFile(text);
    const rewritten = `id,dim=2560\nP1,${Array.from(vectors.get('P1')!, String).join(',')}\n`;
    const again = parseEmbeddingFile(rewritten);
    expect(Array.from(again.vectors.get('P1')!)).toEqual(Array.from(vectors.get('P1')!));
  });

  it('writes a header-only file for an empty dataset', () => {
    const { dataset, out } = writeDataset([]);
    const result = run([dataset, out]);
    expect(result.embedded).toBe(0);
    const { vectors } = parseEmbeddingFile(readFileSync(out, 'utf-8'));
    expect(vectors.size).toBe(0);
  });

  it('lists unknown-residue records in the sidecar report and keeps going', () => {
    const { dataset, out, dir } = writeDataset([
      'GOOD,ACGTT,MKV,1.0,pkd',
      'BAD,ACGTT,MK7V,1.0,pkd',
    ]);
    const report = join(dir, 'failures.txt');
    const result = run([dataset, out, '--layer', '2', '--report', report]);
    expect(result).toEqual({ embedded: 1, failed: 1 });
    const { vectors } = parseEmbeddingFile(readFileSync(out, 'utf-8'));
    expect([...vectors.keys()]).toEqual(['GOOD']);
    expect(readFileSync(report, 'utf-8')).toMatch(/^BAD\t.*unknown residue/);
  });

  it('supports cls pooling via the flag', () => {
    const { dataset, out, dir } = writeDataset(['P1,ACGTT,MKV,1.0,pkd']);
    run([dataset, out, '--layer', '2']);
    const out2 = join(dir, 'cls.csv');
    run([dataset, out2, '--layer', '2', '--pool', 'cls']);
    const a = parseEmbeddingFile(readFileSync(out, 'utf-8')).vectors.get('P1')!;
    const b = parseEmbeddingFile(readFileSync(out2, 'utf-8')).vectors.get('P1')!;
    expect(Array.from(a)).not.toEqual(Array.from(b));
  });

  it('rejects bad flags', () => {
    const { dataset, out } = writeDataset([]);
    expect(() => run([dataset, out, '--pool', 'max'])).toThrow(/--pool/);
    expect(() => run([dataset])).toThrow(/usage/);
  });
});
