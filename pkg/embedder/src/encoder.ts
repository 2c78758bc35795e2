/**
 * Deterministic residue-sequence encoder.
 *
 * Stands in for a large protein language model: same interface shape
 * (36 mixing layers, 2560-dim residue states, begin/end marker tokens,
 * mean pooling over residues), but all weights are derived from a fixed
 * model-id hash, so identical sequences always produce identical vectors
 * with no downloads. Swap in real model output by writing the same file
 * format; consumers only depend on the file contract.
 */

export const EMBEDDING_DIM = 2560;
export const NUM_LAYERS = 36;
export const MODEL_ID = 'detseq-residue-encoder/1';

export const RESIDUES = 'ACDEFGHIKLMNPQRSTVWYXBZUO';

const BOS = '<bos>';
const EOS = '<eos>';

export class UnknownResidueError extends Error {
  constructor(public residue: string, public position: number) {
    super(`unknown residue ${JSON.stringify(residue)} at position ${position}`);
    this.name = 'UnknownResidueError';
  }
}

/** FNV-1a, enough to key the weight PRNG off strings. */
function hashString(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function seededVector(key: string, dim: number, scale = 1.0): Float64Array {
  const rng = mulberry32(hashString(`${MODEL_ID}:${key}`));
  const out = new Float64Array(dim);
  for (let d = 0; d < dim; d++) {
    out[d] = scale * (2 * rng() - 1);
  }
  return out;
}

export type Pooling = 'mean' | 'cls';

export interface EncoderOptions {
  layer?: number;
  dim?: number;
}

export class ResidueEncoder {
  readonly layer: number;
  readonly dim: number;
  private tokenVectors = new Map<string, Float64Array>();
  private layerGains: Float64Array[] = [];

  constructor(options: EncoderOptions = {}) {
    this.layer = options.layer ?? NUM_LAYERS;
    this.dim = options.dim ?? EMBEDDING_DIM;
    if (this.layer < 1 || this.layer > NUM_LAYERS) {
      throw new Error(`layer must be in 1..${NUM_LAYERS}, got ${this.layer}`);
    }
    for (let l = 0; l < this.layer; l++) {
      this.layerGains.push(seededVector(`layer:${l}`, this.dim, 0.5));
    }
  }

  private tokenVector(token: string): Float64Array {
    let vec = this.tokenVectors.get(token);
    if (vec === undefined) {
      vec = seededVector(`tok:${token}`, this.dim);
      this.tokenVectors.set(token, vec);
    }
    return vec;
  }

  private initialStates(sequence: string): Float64Array[] {
    const tokens = [BOS, ...sequence.split(''), EOS];
    const dim = this.dim;
    return tokens.map((token, i) => {
      const base = this.tokenVector(token);
      const state = new Float64Array(dim);
      for (let d = 0; d < dim; d++) {
        state[d] = base[d] + 0.1 * Math.sin((i + 1) / Math.pow(10000, d / dim));
      }
      return state;
    });
  }

  /** One mixing layer: neighbor average, then a gated channel shuffle. */
  private applyLayer(states: Float64Array[], gains: Float64Array): Float64Array[] {
    const n = states.length;
    const dim = this.dim;
    const mixed: Float64Array[] = new Array(n);
    for (let i = 0; i < n; i++) {
      const here = states[i];
      const prev = states[i > 0 ? i - 1 : i];
      const next = states[i < n - 1 ? i + 1 : i];
      const m = new Float64Array(dim);
      for (let d = 0; d < dim; d++) {
        m[d] = 0.5 * here[d] + 0.25 * prev[d] + 0.25 * next[d];
      }
      mixed[i] = m;
    }
    const out: Float64Array[] = new Array(n);
    for (let i = 0; i < n; i++) {
      const m = mixed[i];
      const next = new Float64Array(dim);
      for (let d = 0; d < dim; d++) {
        const partner = (d * 7 + 13) % dim;
        next[d] = Math.tanh(m[d] + gains[d] * m[partner]);
      }
      out[i] = next;
    }
    return out;
  }

  /**
   * Embed one sequence: run all mixing layers, pool over residue states
   * (marker tokens excluded), mean by default.
   */
  embed(sequence: string, pool: Pooling = 'mean'): Float64Array {
    for (let i = 0; i < sequence.length; i++) {
      if (!RESIDUES.includes(sequence[i])) {
        throw new UnknownResidueError(sequence[i], i + 1);
      }
    }
    let states = this.initialStates(sequence);
    for (let l = 0; l < this.layer; l++) {
      states = this.applyLayer(states, this.layerGains[l]);
    }
    if (pool === 'cls') {
      return states[0];
    }
    const dim = this.dim;
    const out = new Float64Array(dim);
    const residueCount = states.length - 2;
    if (residueCount === 0) {
      return out;
    }
    for (let i = 1; i <= residueCount; i++) {
      const s = states[i];
      for (let d = 0; d < dim; d++) {
        out[d] += s[d];
      }
    }
    for (let d = 0; d < dim; d++) {
      out[d] /= residueCount;
    }
    return out;
  }
}
