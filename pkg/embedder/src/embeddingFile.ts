/**
 * The embedding file contract shared with the downstream pipeline:
 * optional `#` comment lines, a `id,dim=N` header, then one comma-separated
 * row per record. Floats are written with JavaScript's shortest round-trip
 * representation, which preserves every bit on re-parse.
 */

export interface EmbeddingFileOptions {
  dim: number;
  comments?: string[];
}

export function formatEmbeddingFile(
  rows: Iterable<[string, Float64Array]>,
  options: EmbeddingFileOptions,
): string {
  const parts: string[] = [];
  for (const comment of options.comments ?? []) {
    parts.push(`# ${comment}\n`);
  }
  parts.push(`id,dim=${options.dim}\n`);
  for (const [id, vector] of rows) {
    if (vector.length !== options.dim) {
      throw new Error(`vector for ${JSON.stringify(id)} has length ${vector.length}, expected ${options.dim}`);
    }
    parts.push(`${id},${Array.from(vector, (v) => String(v)).join(',')}\n`);
  }
  return parts.join('');
}

export function parseEmbeddingFile(text: string): { dim: number; vectors: Map<string, Float64Array> } {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.trim() !== '' && !line.trimStart().startsWith('#'));
  if (lines.length === 0) {
    throw new Error('embedding file has no header');
  }
  const match = /^id,dim=(\d+)$/.exec(lines[0].trim());
  if (!match) {
    throw new Error(`bad embedding header: ${JSON.stringify(lines[0])}`);
  }
  const dim = Number(match[1]);
  const vectors = new Map<string, Float64Array>();
  for (const line of lines.slice(1)) {
    const cells = line.split(',');
    const id = cells[0];
    if (vectors.has(id)) {
      throw new Error(`duplicate id ${JSON.stringify(id)}`);
    }
    if (cells.length - 1 !== dim) {
      throw new Error(`row ${JSON.stringify(id)} has ${cells.length - 1} values, expected ${dim}`);
    }
    vectors.set(id, Float64Array.from(cells.slice(1), Number));
  }
  return { dim, vectors };
}
