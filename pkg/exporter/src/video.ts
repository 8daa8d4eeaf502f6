/**
 * Video input: uncompressed .y4m files or directories of PNG frames.
 *
 * Rendered animation sequences are expected either as YUV4MPEG2 (the
 * standard uncompressed interchange format of video-quality work) or as
 * numbered PNG frames plus a frame rate. Frames are decoded to RGB in
 * [0, 1].
 */

import * as fs from 'fs';
import * as path from 'path';
import { PNG } from 'pngjs';

export interface Frame {
  width: number;
  height: number;
  /** H*W*3 RGB, row-major, values in [0, 1] */
  data: Float32Array;
}

export interface Video {
  id: string;
  fps: number;
  frames: Frame[];
}

const FRAME_MAGIC = Buffer.from('FRAME');

function clamp01(x: number): number {
  return x < 0 ? 0 : x > 1 ? 1 : x;
}

/** BT.601 limited-range YUV to RGB, the y4m convention. */
function yuvToRgb(
  y: Uint8Array,
  u: Uint8Array,
  v: Uint8Array,
  width: number,
  height: number,
  chromaSub: number
): Float32Array {
  const rgb = new Float32Array(width * height * 3);
  const cw = chromaSub === 1 ? width : Math.ceil(width / 2);
  for (let row = 0; row < height; row++) {
    const crow = chromaSub === 1 ? row : row >> 1;
    for (let col = 0; col < width; col++) {
      const ccol = chromaSub === 1 ? col : col >> 1;
      const yy = 1.164 * (y[row * width + col] - 16);
      const uu = u[crow * cw + ccol] - 128;
      const vv = v[crow * cw + ccol] - 128;
      const o = (row * width + col) * 3;
      rgb[o] = clamp01((yy + 1.596 * vv) / 255);
      rgb[o + 1] = clamp01((yy - 0.392 * uu - 0.813 * vv) / 255);
      rgb[o + 2] = clamp01((yy + 2.017 * uu) / 255);
    }
  }
  return rgb;
}

/** Parse a YUV4MPEG2 stream. Supports C420*, C444 and Cmono. */
export function parseY4m(buffer: Buffer, id: string): Video {
  const headerEnd = buffer.indexOf(0x0a);
  if (headerEnd < 0 || !buffer.subarray(0, 9).equals(Buffer.from('YUV4MPEG2'))) {
    throw new Error(`${id}: not a YUV4MPEG2 stream`);
  }
  const header = buffer.subarray(0, headerEnd).toString('ascii');
  let width = 0;
  let height = 0;
  let fps = 0;
  let colorspace = 'C420jpeg';
  for (const token of header.split(' ').slice(1)) {
    const tag = token[0];
    const rest = token.slice(1);
    if (tag === 'W') width = parseInt(rest, 10);
    else if (tag === 'H') height = parseInt(rest, 10);
    else if (tag === 'F') {
      const [num, den] = rest.split(':').map(Number);
      fps = num / den;
    } else if (tag === 'C') colorspace = token;
  }
  if (!width || !height || !fps) {
    throw new Error(`${id}: y4m header lacks W/H/F`);
  }

  let chromaSub: number;
  let mono = false;
  if (colorspace.startsWith('C420')) chromaSub = 2;
  else if (colorspace === 'C444') chromaSub = 1;
  else if (colorspace === 'Cmono') {
    chromaSub = 1;
    mono = true;
  } else {
    throw new Error(`${id}: unsupported colorspace ${colorspace}`);
  }

  const ySize = width * height;
  const cSize = mono ? 0 : chromaSub === 1 ? ySize : Math.ceil(width / 2) * Math.ceil(height / 2);
  const frameBytes = ySize + 2 * cSize;

  const frames: Frame[] = [];
  let offset = headerEnd + 1;
  while (offset < buffer.length) {
    if (!buffer.subarray(offset, offset + 5).equals(FRAME_MAGIC)) {
      throw new Error(`${id}: bad frame marker at byte ${offset}`);
    }
    const paramEnd = buffer.indexOf(0x0a, offset);
    if (paramEnd < 0) throw new Error(`${id}: truncated frame header`);
    offset = paramEnd + 1;
    if (offset + frameBytes > buffer.length) {
      throw new Error(`${id}: truncated frame data`);
    }
    const yPlane = buffer.subarray(offset, offset + ySize);
    let data: Float32Array;
    if (mono) {
      data = new Float32Array(ySize * 3);
      for (let i = 0; i < ySize; i++) {
        const g = clamp01((1.164 * (yPlane[i] - 16)) / 255);
        data[i * 3] = g;
        data[i * 3 + 1] = g;
        data[i * 3 + 2] = g;
      }
    } else {
      const uPlane = buffer.subarray(offset + ySize, offset + ySize + cSize);
      const vPlane = buffer.subarray(offset + ySize + cSize, offset + frameBytes);
      data = yuvToRgb(yPlane, uPlane, vPlane, width, height, chromaSub);
    }
    frames.push({ width, height, data });
    offset += frameBytes;
  }
  if (!frames.length) throw new Error(`${id}: zero frames`);
  return { id, fps, frames };
}

export function decodePng(buffer: Buffer): Frame {
  const png = PNG.sync.read(buffer);
  const data = new Float32Array(png.width * png.height * 3);
  for (let i = 0; i < png.width * png.height; i++) {
    data[i * 3] = png.data[i * 4] / 255;
    data[i * 3 + 1] = png.data[i * 4 + 1] / 255;
    data[i * 3 + 2] = png.data[i * 4 + 2] / 255;
  }
  return { width: png.width, height: png.height, data };
}

/** A directory of PNG frames; fps from meta.json or the caller. */
export function readFrameDir(dir: string, id: string, fps?: number): Video {
  const files = fs
    .readdirSync(dir)
    .filter((f) => f.toLowerCase().endsWith('.png'))
    .sort();
  if (!files.length) throw new Error(`${dir}: zero frames`);
  let rate = fps;
  const metaPath = path.join(dir, 'meta.json');
  if (rate === undefined && fs.existsSync(metaPath)) {
    rate = JSON.parse(fs.readFileSync(metaPath, 'utf-8')).fps;
  }
  if (!rate || rate <= 0) {
    throw new Error(`${dir}: frame rate unknown (add meta.json or pass --fps)`);
  }
  const frames = files.map((f) => decodePng(fs.readFileSync(path.join(dir, f))));
  for (const frame of frames) {
    if (frame.width !== frames[0].width || frame.height !== frames[0].height) {
      throw new Error(`${dir}: frames disagree on dimensions`);
    }
  }
  return { id, fps: rate, frames };
}

/** Load a video from a .y4m file or a PNG frame directory. */
export function loadVideo(input: string, fps?: number): Video {
  const id = path.basename(input).replace(/\.(y4m)$/i, '');
  const stat = fs.statSync(input);
  if (stat.isDirectory()) return readFrameDir(input, id, fps);
  if (input.toLowerCase().endsWith('.y4m')) {
    return parseY4m(fs.readFileSync(input), id);
  }
  throw new Error(`${input}: unsupported input (expect .y4m or a frame directory)`);
}
