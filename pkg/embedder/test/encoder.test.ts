import { describe, expect, it } from 'vitest';

import {
  EMBEDDING_DIM,
  NUM_LAYERS,
  ResidueEncoder,
  UnknownResidueError,
} from '../src/encoder.js';

// a small dimension keeps the unit tests fast; the CLI tests cover 2560
const tiny = { layer: 4, dim: 32 };

describe('ResidueEncoder', () => {
  it('produces vectors of the configured dimension', () => {
    const encoder = new ResidueEncoder(tiny);
    expect(encoder.embed('MKVLILACLVA').length).toBe(32);
  });

  it('defaults to the full model shape', () => {
    const encoder = new ResidueEncoder();
    expect(encoder.dim).toBe(EMBEDDING_DIM);
    expect(encoder.layer).toBe(NUM_LAYERS);
  });

  it('is deterministic across instances', () => {
    const a = new ResidueEncoder(tiny).embed('MKWQASTNDEG');
    const b = new ResidueEncoder(tiny).embed('MKWQASTNDEG');
    expect(Array.from(a)).toEqual(Array.from(b));
  });

  it('separates different sequences', () => {
    const encoder = new ResidueEncoder(tiny);
    const a = encoder.embed('MKVLILACLVA');
    const b = encoder.embed('MKVLILACLVV');
    expect(Array.from(a)).not.toEqual(Array.from(b));
  });

  it('is order sensitive', () => {
    const encoder = new ResidueEncoder(tiny);
    expect(Array.from(encoder.embed('MKV'))).not.toEqual(Array.from(encoder.embed('VKM')));
  });

  it('rejects unknown residues with position info', () => {
    const encoder = new ResidueEncoder(tiny);
    expect(() => encoder.embed('MK1V')).toThrowError(UnknownResidueError);
    try {
      encoder.embed('MK1V');
    } catch (err) {
      expect((err as UnknownResidueError).position).toBe(3);
    }
  });

  it('supports cls pooling distinct from mean', () => {
    const encoder = new ResidueEncoder(tiny);
    const mean = encoder.embed('MKVLILACLVA', 'mean');
    const cls = encoder.embed('MKVLILACLVA', 'cls');
    expect(Array.from(mean)).not.toEqual(Array.from(cls));
  });

  it('rejects layers beyond the model depth', () => {
    expect(() => new ResidueEncoder({ layer: NUM_LAYERS + 1 })).toThrow();
  });
});
