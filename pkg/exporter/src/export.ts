/**
 * The exporter pipeline: video files -> clip feature records.
 *
 * Output is the clip-feature interchange format consumed by the
 * regression pipeline: a line-delimited JSON file opening with a
 * {"d_s", "d_t"} header record, then one record per clip carrying the
 * spatial features of the clip's key frame and the temporal features of
 * the whole clip.
 */

import * as fs from 'fs';
import * as tf from '@tensorflow/tfjs';
import { Backbone2D, SPATIAL_DIM } from './backbone2d';
import { Backbone3D, TEMPORAL_DIM } from './backbone3d';
import { clipBoundaries } from './clips';
import { spatialInput, temporalInput } from './image';
import { loadVideo, Video } from './video';

export interface ClipRecord {
  video_id: string;
  clip_index: number;
  sf: number[];
  tf: number[];
}

export interface ExportManifest {
  /** .y4m files or PNG frame directories */
  inputs: string[];
  outputPath: string;
  /** frame-rate override for frame directories without meta.json */
  fps?: number;
  seed?: number;
}

export interface ExportResult {
  dS: number;
  dT: number;
  records: ClipRecord[];
  failures: { input: string; error: string }[];
}

export function exportVideoFeatures(
  video: Video,
  backbone2d: Backbone2D,
  backbone3d: Backbone3D
): ClipRecord[] {
  const records: ClipRecord[] = [];
  for (const clip of clipBoundaries(video)) {
    const key = spatialInput(video.frames[clip.keyFrame]);
    const sf = backbone2d.features(key);
    key.dispose();

    const clipFrames = video.frames.slice(clip.start, clip.end).map(temporalInput);
    const tfVec = backbone3d.features(clipFrames);
    clipFrames.forEach((t) => t.dispose());

    records.push({
      video_id: video.id,
      clip_index: clip.index,
      sf: Array.from(sf),
      tf: Array.from(tfVec),
    });
  }
  return records;
}

export async function runExport(manifest: ExportManifest): Promise<ExportResult> {
  await tf.setBackend('cpu');
  await tf.ready();
  const seed = manifest.seed ?? 0;
  const backbone2d = new Backbone2D(seed);
  const backbone3d = new Backbone3D(seed);
  const records: ClipRecord[] = [];
  const failures: { input: string; error: string }[] = [];
  try {
    for (const input of manifest.inputs) {
      try {
        const video = loadVideo(input, manifest.fps);
        records.push(...exportVideoFeatures(video, backbone2d, backbone3d));
      } catch (err) {
        failures.push({ input, error: String(err instanceof Error ? err.message : err) });
      }
    }
  } finally {
    backbone2d.dispose();
    backbone3d.dispose();
  }

  const lines: string[] = [];
  lines.push(
    JSON.stringify({ meta: { tool: 'ddhqa-exporter', tool_version: '0.1.0', seed } })
  );
  lines.push(JSON.stringify({ d_s: SPATIAL_DIM, d_t: TEMPORAL_DIM }));
  for (const record of records) {
    lines.push(JSON.stringify(record));
  }
  fs.writeFileSync(manifest.outputPath, lines.join('\n') + '\n');
  return { dS: SPATIAL_DIM, dT: TEMPORAL_DIM, records, failures };
}

/** Validate a clip-feature file against the interchange schema. */
export function validateClipFeatureFile(path: string): {
  dS: number;
  dT: number;
  count: number;
} {
  const lines = fs
    .readFileSync(path, 'utf-8')
    .split('\n')
    .filter((line) => line.trim().length > 0);
  let header: { d_s: number; d_t: number } | undefined;
  let count = 0;
  for (const line of lines) {
    const obj = JSON.parse(line);
    if ('meta' in obj) continue;
    if (!header) {
      if (typeof obj.d_s !== 'number' || typeof obj.d_t !== 'number') {
        throw new Error('first record must be the {"d_s", "d_t"} header');
      }
      header = obj;
      continue;
    }
    if (typeof obj.video_id !== 'string' || !Number.isInteger(obj.clip_index) || obj.clip_index < 0) {
      throw new Error(`record ${count}: bad video_id/clip_index`);
    }
    if (!Array.isArray(obj.sf) || obj.sf.length !== header.d_s) {
      throw new Error(`record ${count}: sf length ${obj.sf?.length} != d_s ${header.d_s}`);
    }
    if (!Array.isArray(obj.tf) || obj.tf.length !== header.d_t) {
      throw new Error(`record ${count}: tf length ${obj.tf?.length} != d_t ${header.d_t}`);
    }
    for (const v of [...obj.sf, ...obj.tf]) {
      if (typeof v !== 'number' || !Number.isFinite(v)) {
        throw new Error(`record ${count}: non-finite feature value`);
      }
    }
    count++;
  }
  if (!header) throw new Error('missing header record');
  return { dS: header.d_s, dT: header.d_t, count };
}
