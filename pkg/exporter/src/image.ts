/**
 * Frame preprocessing: bilinear resize and center crop, matching the
 * crop/resize conventions of the feature pipeline (448x448 crops for the
 * spatial path, 224x224 resize for the temporal path).
 */

import * as tf from '@tensorflow/tfjs';
import { Frame } from './video';

export const SPATIAL_CROP = 448;
export const TEMPORAL_SIZE = 224;

export function frameToTensor(frame: Frame): tf.Tensor3D {
  return tf.tensor3d(frame.data, [frame.height, frame.width, 3]);
}

/** Resize so the shorter side equals `shortSide`, keeping aspect ratio. */
export function resizeShortSide(image: tf.Tensor3D, shortSide: number): tf.Tensor3D {
  const [h, w] = image.shape;
  const scale = shortSide / Math.min(h, w);
  const nh = Math.max(shortSide, Math.round(h * scale));
  const nw = Math.max(shortSide, Math.round(w * scale));
  return tf.image.resizeBilinear(image, [nh, nw]);
}

export function centerCrop(image: tf.Tensor3D, size: number): tf.Tensor3D {
  const [h, w] = image.shape;
  if (h < size || w < size) {
    throw new Error(`cannot crop ${size} from ${h}x${w}`);
  }
  const top = Math.floor((h - size) / 2);
  const left = Math.floor((w - size) / 2);
  return tf.slice(image, [top, left, 0], [size, size, 3]);
}

/** The spatial-path view of a key frame: shorter side to 448, center crop. */
export function spatialInput(frame: Frame): tf.Tensor3D {
  return tf.tidy(() => centerCrop(resizeShortSide(frameToTensor(frame), SPATIAL_CROP), SPATIAL_CROP));
}

/** The temporal-path view of a clip frame: plain resize to 224x224. */
export function temporalInput(frame: Frame): tf.Tensor3D {
  return tf.tidy(() => tf.image.resizeBilinear(frameToTensor(frame), [TEMPORAL_SIZE, TEMPORAL_SIZE]));
}
