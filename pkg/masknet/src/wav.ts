/**
 * Mono 16-bit PCM WAV read/write.  Same contract as the engine's wavio:
 * reads return float64 samples in [-1, 1) as int16/32768, writes clip and
 * round back to int16.
 */

import * as fs from 'node:fs';

export interface WavData {
  samples: Float64Array;
  rate: number;
}

export function readWav(path: string, expectRate?: number): WavData {
  const buf = fs.readFileSync(path);
  if (buf.length < 12 || buf.toString('ascii', 0, 4) !== 'RIFF' || buf.toString('ascii', 8, 12) !== 'WAVE') {
    throw new Error(`not a RIFF/WAVE file: ${path}`);
  }

  let fmt: { format: number; channels: number; rate: number; bits: number } | null = null;
  let dataStart = -1;
  let dataLen = 0;
  let off = 12;
  while (off + 8 <= buf.length) {
    const id = buf.toString('ascii', off, off + 4);
    const size = buf.readUInt32LE(off + 4);
    if (id === 'fmt ') {
      fmt = {
        format: buf.readUInt16LE(off + 8),
        channels: buf.readUInt16LE(off + 10),
        rate: buf.readUInt32LE(off + 12),
        bits: buf.readUInt16LE(off + 22),
      };
    } else if (id === 'data') {
      dataStart = off + 8;
      dataLen = size;
      break;
    }
    // chunks are word-aligned
    off += 8 + size + (size % 2);
  }
  if (!fmt || dataStart < 0) {
    throw new Error(`missing fmt/data chunk: ${path}`);
  }
  if (fmt.channels !== 1) {
    throw new Error('expected mono audio');
  }
  if (fmt.format !== 1 || fmt.bits !== 16) {
    throw new Error('expected 16-bit PCM samples');
  }
  if (expectRate !== undefined && fmt.rate !== expectRate) {
    throw new Error(`expected ${expectRate} Hz audio, file is ${fmt.rate} Hz`);
  }
  if (dataStart + dataLen > buf.length) {
    throw new Error(`truncated data chunk: ${path}`);
  }

  const count = Math.floor(dataLen / 2);
  const samples = new Float64Array(count);
  for (let i = 0; i < count; i++) {
    samples[i] = buf.readInt16LE(dataStart + 2 * i) / 32768.0;
  }
  return { samples, rate: fmt.rate };
}

export function writeWav(path: string, samples: ArrayLike<number>, rate: number): void {
  const n = samples.length;
  const dataLen = 2 * n;
  const buf = Buffer.alloc(44 + dataLen);
  buf.write('RIFF', 0, 'ascii');
  buf.writeUInt32LE(36 + dataLen, 4);
  buf.write('WAVE', 8, 'ascii');
  buf.write('fmt ', 12, 'ascii');
  buf.writeUInt32LE(16, 16);
  buf.writeUInt16LE(1, 20); // PCM
  buf.writeUInt16LE(1, 22); // mono
  buf.writeUInt32LE(rate, 24);
  buf.writeUInt32LE(rate * 2, 28); // byte rate
  buf.writeUInt16LE(2, 32); // block align
  buf.writeUInt16LE(16, 34);
  buf.write('data', 36, 'ascii');
  buf.writeUInt32LE(dataLen, 40);
  const hi = 32767.0 / 32768.0;
  for (let i = 0; i < n; i++) {
    let x = samples[i];
    if (x < -1.0) x = -1.0;
    if (x > hi) x = hi;
    buf.writeInt16LE(Math.round(x * 32768.0), 44 + 2 * i);
  }
  fs.writeFileSync(path, buf);
}
