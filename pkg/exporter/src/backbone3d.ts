/**
 * Frozen two-pathway 3D CNN for temporal features.
 *
 * A slow pathway (few frames, 2048 channels) and a fast pathway (more
 * frames, 256 channels) are global-average-pooled and concatenated into
 * a 2304-dimensional clip descriptor. As with the 2D backbone, weights
 * are seeded, frozen and deterministic.
 */

import * as tf from '@tensorflow/tfjs';
import { mulberry32, Rng, uniformWeights } from './rng';

export const SLOW_WIDTH = 2048;
export const FAST_WIDTH = 256;
export const TEMPORAL_DIM = SLOW_WIDTH + FAST_WIDTH; // 2304

export const SLOW_FRAMES = 4;
export const FAST_FRAMES = 8;

interface Conv3dLayer {
  filter: tf.Tensor5D;
  bias: tf.Tensor1D;
  strides: [number, number, number];
}

function makeConv3d(
  rng: Rng,
  k: [number, number, number],
  inC: number,
  outC: number,
  strides: [number, number, number]
): Conv3dLayer {
  const fanIn = k[0] * k[1] * k[2] * inC;
  const limit = Math.sqrt(6 / fanIn);
  const size = k[0] * k[1] * k[2] * inC * outC;
  return {
    filter: tf.tensor5d(uniformWeights(rng, size, limit), [k[0], k[1], k[2], inC, outC]),
    bias: tf.tensor1d(uniformWeights(rng, outC, limit)),
    strides,
  };
}

function applyConv3d(x: tf.Tensor4D, layer: Conv3dLayer): tf.Tensor4D {
  const y = tf.conv3d(
    x.expandDims(0) as tf.Tensor5D,
    layer.filter,
    [layer.strides[0], layer.strides[1], layer.strides[2]],
    'same'
  );
  return tf.relu(tf.add(y.squeeze([0]), layer.bias)) as tf.Tensor4D;
}

/** Evenly sample `count` indices from [0, total). */
export function evenSample(total: number, count: number): number[] {
  const n = Math.min(total, count);
  const indices: number[] = [];
  for (let i = 0; i < n; i++) {
    indices.push(Math.floor((i * total) / n));
  }
  return indices;
}

export class Backbone3D {
  private slow: Conv3dLayer[];
  private fast: Conv3dLayer[];
  readonly seed: number;

  constructor(seed = 0) {
    this.seed = seed;
    const rng = mulberry32(0x3d0000 ^ seed);
    this.slow = [
      makeConv3d(rng, [1, 3, 3], 3, 64, [1, 2, 2]),
      makeConv3d(rng, [1, 1, 1], 64, 256, [2, 2, 2]),
      makeConv3d(rng, [1, 1, 1], 256, SLOW_WIDTH, [1, 2, 2]),
    ];
    this.fast = [
      makeConv3d(rng, [3, 3, 3], 3, 32, [1, 2, 2]),
      makeConv3d(rng, [1, 1, 1], 32, 64, [2, 2, 2]),
      makeConv3d(rng, [1, 1, 1], 64, FAST_WIDTH, [1, 2, 2]),
    ];
  }

  private pathway(frames: tf.Tensor3D[], layers: Conv3dLayer[]): tf.Tensor1D {
    let x = tf.stack(frames) as tf.Tensor4D; // T x H x W x 3
    x = tf.sub(tf.mul(x, 2), 1) as tf.Tensor4D;
    x = tf.avgPool3d(
      x.expandDims(0) as tf.Tensor5D,
      [1, 4, 4],
      [1, 4, 4],
      'same'
    ).squeeze([0]) as tf.Tensor4D; // T x 56 x 56 x 3
    for (const layer of layers) {
      x = applyConv3d(x, layer);
    }
    return tf.mean(x, [0, 1, 2]) as tf.Tensor1D;
  }

  /** Pooled two-pathway features of one clip (preprocessed 224x224 frames). */
  features(clipFrames: tf.Tensor3D[]): Float32Array {
    if (!clipFrames.length) throw new Error('clip has zero frames');
    const out = tf.tidy(() => {
      const slowFrames = evenSample(clipFrames.length, SLOW_FRAMES).map((i) => clipFrames[i]);
      const fastFrames = evenSample(clipFrames.length, FAST_FRAMES).map((i) => clipFrames[i]);
      return tf.concat([
        this.pathway(slowFrames, this.slow),
        this.pathway(fastFrames, this.fast),
      ]);
    });
    const data = out.dataSync() as Float32Array;
    out.dispose();
    return Float32Array.from(data);
  }

  dispose(): void {
    for (const layer of [...this.slow, ...this.fast]) {
      layer.filter.dispose();
      layer.bias.dispose();
    }
  }
}
