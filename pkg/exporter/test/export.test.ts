import { execFileSync, spawnSync } from 'child_process';
import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { describe, expect, it } from 'vitest';
import { clipBoundaries } from '../src/clips';
import { runExport, validateClipFeatureFile } from '../src/export';
import { parseY4m } from '../src/video';
import { makeY4m } from './helpers';

function writeTestVideos(dir: string): string[] {
  // 3 short videos: 2s @ 3fps, 1s @ 4fps, 3s @ 2fps, distinct content
  const specs = [
    { name: 'vidA', fps: 3, nFrames: 6, phase: 1 },
    { name: 'vidB', fps: 4, nFrames: 4, phase: 50 },
    { name: 'vidC', fps: 2, nFrames: 6, phase: 120 },
  ];
  return specs.map(({ name, fps, nFrames, phase }) => {
    const p = path.join(dir, `${name}.y4m`);
    fs.writeFileSync(
      p,
      makeY4m({
        width: 48,
        height: 32,
        fps,
        nFrames,
        pixel: (f, x, y) => 16 + ((x * 5 + y * 3 + f * 17 + phase) % 215),
      })
    );
    return p;
  });
}

describe('clip boundaries', () => {
  it('splits into one-second clips with first-frame keys', () => {
    const video = parseY4m(makeY4m({ width: 8, height: 8, fps: 4, nFrames: 10 }), 'v');
    const clips = clipBoundaries(video);
    expect(clips).toHaveLength(2); // floor(10 / 4)
    expect(clips[0]).toEqual({ index: 0, start: 0, end: 4, keyFrame: 0 });
    expect(clips[1]).toEqual({ index: 1, start: 4, end: 8, keyFrame: 4 });
  });

  it('rejects videos shorter than one clip', () => {
    const video = parseY4m(makeY4m({ width: 8, height: 8, fps: 8, nFrames: 3 }), 'v');
    expect(() => clipBoundaries(video)).toThrow(/too short/);
  });
});

describe('export end to end', () => {
  it('produces a schema-valid file the training pipeline consumes', async () => {
    const work = fs.mkdtempSync(path.join(os.tmpdir(), 'export-'));
    const videos = writeTestVideos(work);
    const outPath = path.join(work, 'clips.jsonl');

    const result = await runExport({ inputs: videos, outputPath: outPath, seed: 0 });
    expect(result.failures).toEqual([]);
    // 2 + 1 + 3 one-second clips
    expect(result.records).toHaveLength(6);

    // schema: header dims match every record, all entries finite
    const check = validateClipFeatureFile(outPath);
    expect(check.dS).toBe(3840);
    expect(check.dT).toBe(2304);
    expect(check.count).toBe(6);

    // the primary pipeline trains on it end to end (3 short videos)
    const probe = spawnSync('python3', ['-c', 'import ddhqa'], { encoding: 'utf-8' });
    if (probe.status !== 0) {
      console.warn('python3 + ddhqa unavailable; skipping cmd_train consumption check');
      return;
    }
    const gfPath = path.join(work, 'gf.jsonl');
    const mosPath = path.join(work, 'mos.csv');
    const script = `
import json
import numpy as np
rng = np.random.default_rng(0)
ids = ["vidA", "vidB", "vidC"]
with open(${JSON.stringify(gfPath)}, "w") as fh:
    for i in ids:
        fh.write(json.dumps({"model_id": i, "gf": [float(v) for v in rng.normal(size=22)]}) + "\\n")
with open(${JSON.stringify(mosPath)}, "w") as fh:
    fh.write("video_id,mos,group_id\\n")
    for k, i in enumerate(ids):
        fh.write(f"{i},{3.0 + k * 0.5},g{k}\\n")
`;
    execFileSync('python3', ['-c', script]);
    const headPath = path.join(work, 'head.json');
    execFileSync('python3', [
      '-m', 'ddhqa', 'train',
      '--gf', gfPath,
      '--clips', outPath,
      '--mos', mosPath,
      '--out', headPath,
      '--epochs', '2',
      '--hidden-dim', '4',
      '--learning-rate', '1e-4',
    ]);
    const artifact = JSON.parse(fs.readFileSync(headPath, 'utf-8'));
    expect(artifact.format_version).toBe(1);
    expect(artifact.d_s).toBe(3840);
    expect(artifact.d_t).toBe(2304);
  }, 600_000);

  it('is deterministic across runs', async () => {
    const work = fs.mkdtempSync(path.join(os.tmpdir(), 'export-'));
    const video = path.join(work, 'v.y4m');
    fs.writeFileSync(video, makeY4m({ width: 32, height: 32, fps: 2, nFrames: 2 }));
    const out1 = path.join(work, 'c1.jsonl');
    const out2 = path.join(work, 'c2.jsonl');
    await runExport({ inputs: [video], outputPath: out1, seed: 3 });
    await runExport({ inputs: [video], outputPath: out2, seed: 3 });
    expect(fs.readFileSync(out1, 'utf-8')).toBe(fs.readFileSync(out2, 'utf-8'));
  }, 600_000);

  it('logs unreadable inputs and keeps going', async () => {
    const work = fs.mkdtempSync(path.join(os.tmpdir(), 'export-'));
    const good = path.join(work, 'ok.y4m');
    fs.writeFileSync(good, makeY4m({ width: 32, height: 32, fps: 2, nFrames: 2 }));
    const bad = path.join(work, 'broken.y4m');
    fs.writeFileSync(bad, 'not a video');
    const out = path.join(work, 'clips.jsonl');
    const result = await runExport({ inputs: [bad, good], outputPath: out, seed: 0 });
    expect(result.failures).toHaveLength(1);
    expect(result.records.length).toBeGreaterThan(0);
    validateClipFeatureFile(out);
  }, 600_000);

  it('rejects malformed feature files', () => {
    const work = fs.mkdtempSync(path.join(os.tmpdir(), 'export-'));
    const p = path.join(work, 'bad.jsonl');
    fs.writeFileSync(
      p,
      JSON.stringify({ d_s: 4, d_t: 2 }) +
        '\n' +
        JSON.stringify({ video_id: 'v', clip_index: 0, sf: [1, 2, 3], tf: [0, 0] }) +
        '\n'
    );
    expect(() => validateClipFeatureFile(p)).toThrow(/sf length/);
  });
});
