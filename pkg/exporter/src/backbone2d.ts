/**
 * Frozen multi-stage 2D CNN for spatial features.
 *
 * Four stages with channel widths 256 / 512 / 1024 / 2048; each stage's
 * feature map is global-average-pooled and the pooled vectors are
 * concatenated, giving a 3840-dimensional multi-scale descriptor per key
 * frame. Weights are generated from a seed and never trained: the
 * exporter runs backbones frozen in evaluation mode, and falls back to a
 * deterministic random initialization when no pretrained checkpoint is
 * available in the environment.
 */

import * as tf from '@tensorflow/tfjs';
import { mulberry32, Rng, uniformWeights } from './rng';

export const STAGE_WIDTHS = [256, 512, 1024, 2048] as const;
export const SPATIAL_DIM = 256 + 512 + 1024 + 2048; // 3840

interface Conv2dLayer {
  filter: tf.Tensor4D;
  bias: tf.Tensor1D;
  stride: number;
}

function makeConv2d(rng: Rng, k: number, inC: number, outC: number, stride: number): Conv2dLayer {
  const fanIn = k * k * inC;
  const limit = Math.sqrt(6 / fanIn);
  return {
    filter: tf.tensor4d(uniformWeights(rng, k * k * inC * outC, limit), [k, k, inC, outC]),
    bias: tf.tensor1d(uniformWeights(rng, outC, limit)),
    stride,
  };
}

function applyConv2d(x: tf.Tensor3D, layer: Conv2dLayer): tf.Tensor3D {
  const y = tf.conv2d(x, layer.filter, layer.stride, 'same');
  return tf.relu(tf.add(y, layer.bias)) as tf.Tensor3D;
}

export class Backbone2D {
  private stem: Conv2dLayer;
  private stages: Conv2dLayer[];
  readonly seed: number;

  constructor(seed = 0) {
    this.seed = seed;
    const rng = mulberry32(0x2d0000 ^ seed);
    this.stem = makeConv2d(rng, 16, 3, 64, 16);
    this.stages = [
      makeConv2d(rng, 3, 64, STAGE_WIDTHS[0], 2),
      makeConv2d(rng, 1, STAGE_WIDTHS[0], STAGE_WIDTHS[1], 2),
      makeConv2d(rng, 1, STAGE_WIDTHS[1], STAGE_WIDTHS[2], 2),
      makeConv2d(rng, 1, STAGE_WIDTHS[2], STAGE_WIDTHS[3], 2),
    ];
  }

  /** Multi-scale pooled features of one preprocessed 448x448x3 frame. */
  features(image: tf.Tensor3D): Float32Array {
    const out = tf.tidy(() => {
      let x = tf.sub(tf.mul(image, 2), 1) as tf.Tensor3D; // [0,1] -> [-1,1]
      x = applyConv2d(x, this.stem);
      const pooled: tf.Tensor1D[] = [];
      for (const stage of this.stages) {
        x = applyConv2d(x, stage);
        pooled.push(tf.mean(x, [0, 1]) as tf.Tensor1D);
      }
      return tf.concat(pooled);
    });
    const data = out.dataSync() as Float32Array;
    out.dispose();
    return Float32Array.from(data);
  }

  dispose(): void {
    for (const layer of [this.stem, ...this.stages]) {
      layer.filter.dispose();
      layer.bias.dispose();
    }
  }
}
