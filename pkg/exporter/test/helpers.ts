import { PNG } from 'pngjs';
import { mulberry32 } from '../src/rng';

/** Build an in-memory y4m stream with a per-frame pixel generator. */
export function makeY4m(options: {
  width: number;
  height: number;
  fps: number;
  nFrames: number;
  colorspace?: 'C420jpeg' | 'C444' | 'Cmono';
  pixel?: (frame: number, x: number, y: number) => number; // luma 16..235
}): Buffer {
  const { width, height, fps, nFrames } = options;
  const colorspace = options.colorspace ?? 'C420jpeg';
  const pixel = options.pixel ?? ((f, x, y) => 16 + ((f * 31 + x * 7 + y * 13) % 220));
  const chunks: Buffer[] = [
    Buffer.from(`YUV4MPEG2 W${width} H${height} F${fps}:1 Ip A1:1 ${colorspace}\n`),
  ];
  const cw = colorspace === 'C444' ? width : Math.ceil(width / 2);
  const ch = colorspace === 'C444' ? height : Math.ceil(height / 2);
  for (let f = 0; f < nFrames; f++) {
    chunks.push(Buffer.from('FRAME\n'));
    const yPlane = Buffer.alloc(width * height);
    for (let yy = 0; yy < height; yy++) {
      for (let xx = 0; xx < width; xx++) {
        yPlane[yy * width + xx] = pixel(f, xx, yy);
      }
    }
    chunks.push(yPlane);
    if (colorspace !== 'Cmono') {
      chunks.push(Buffer.alloc(cw * ch, 128)); // neutral U
      chunks.push(Buffer.alloc(cw * ch, 128)); // neutral V
    }
  }
  return Buffer.concat(chunks);
}

/** A random-noise RGB PNG as a buffer. */
export function makePng(width: number, height: number, seed: number): Buffer {
  const rng = mulberry32(seed);
  const png = new PNG({ width, height });
  for (let i = 0; i < width * height; i++) {
    png.data[i * 4] = Math.floor(rng() * 256);
    png.data[i * 4 + 1] = Math.floor(rng() * 256);
    png.data[i * 4 + 2] = Math.floor(rng() * 256);
    png.data[i * 4 + 3] = 255;
  }
  return PNG.sync.write(png);
}
