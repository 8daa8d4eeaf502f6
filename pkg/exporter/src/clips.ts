/**
 * Clip segmentation: a video of n_f frames at r_f frames per second is
 * split into floor(n_f / r_f) one-second clips; the first frame of each
 * clip is its key frame.
 */

import { Video } from './video';

export interface ClipBounds {
  index: number;
  /** frame indices [start, end) */
  start: number;
  end: number;
  keyFrame: number;
}

export function clipBoundaries(video: Video): ClipBounds[] {
  const perClip = Math.max(1, Math.round(video.fps));
  const nClips = Math.floor(video.frames.length / perClip);
  if (nClips < 1) {
    throw new Error(
      `${video.id}: too short (${video.frames.length} frames at ${video.fps} fps is under one clip)`
    );
  }
  const clips: ClipBounds[] = [];
  for (let i = 0; i < nClips; i++) {
    clips.push({
      index: i,
      start: i * perClip,
      end: (i + 1) * perClip,
      keyFrame: i * perClip,
    });
  }
  return clips;
}
