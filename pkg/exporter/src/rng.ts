/**
 * Deterministic PRNG for backbone weight generation.
 *
 * mulberry32: tiny, fast, and good enough for seeding frozen random
 * projections; the point is bit-for-bit reproducibility across runs and
 * platforms, not statistical perfection.
 */

export type Rng = () => number;

export function mulberry32(seed: number): Rng {
  let a = seed >>> 0;
  return function () {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Uniform values in [-limit, +limit] as a Float32Array. */
export function uniformWeights(rng: Rng, size: number, limit: number): Float32Array {
  const out = new Float32Array(size);
  for (let i = 0; i < size; i++) {
    out[i] = (rng() * 2 - 1) * limit;
  }
  return out;
}
