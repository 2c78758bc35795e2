/**
 * Reader for the delimited complex-dataset files consumed by the main
 * pipeline: a header naming at least `id` and `protein_sequence`, comma or
 * tab delimited (sniffed from the header line), `#` comment lines ignored.
 */

export interface ProteinRecord {
  id: string;
  proteinSequence: string;
}

export class DatasetError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'DatasetError';
  }
}

export function parseDataset(text: string): ProteinRecord[] {
  const lines = text
    .split(/\r?\n/)
    .map((line, index) => ({ line, no: index + 1 }))
    .filter(({ line }) => line.trim() !== '' && !line.trimStart().startsWith('#'));
  if (lines.length === 0) {
    throw new DatasetError('dataset has no header line');
  }
  const headerLine = lines[0].line;
  const delim = headerLine.includes('\t') ? '\t' : ',';
  const columns = headerLine.split(delim).map((c) => c.trim());
  const idCol = columns.indexOf('id');
  const seqCol = columns.indexOf('protein_sequence');
  if (idCol < 0 || seqCol < 0) {
    throw new DatasetError("dataset header must name 'id' and 'protein_sequence' columns");
  }

  const records: ProteinRecord[] = [];
  const seen = new Set<string>();
  for (const { line, no } of lines.slice(1)) {
    const cells = line.split(delim);
    if (cells.length < columns.length) {
      throw new DatasetError(`line ${no}: expected ${columns.length} fields, got ${cells.length}`);
    }
    const id = cells[idCol].trim();
    if (id === '') {
      throw new DatasetError(`line ${no}: empty id`);
    }
    if (seen.has(id)) {
      throw new DatasetError(`line ${no}: duplicate id ${JSON.stringify(id)}`);
    }
    seen.add(id);
    records.push({ id, proteinSequence: cells[seqCol].trim().toUpperCase() });
  }
  return records;
}
