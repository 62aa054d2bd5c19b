/**
 * MFSM mask-file writer/reader, binary-compatible with the mfse engine's
 * masks module:
 *
 *     offset  size  field
 *     0       4     magic "MFSM"
 *     4       4     version (u32, = 1)
 *     8       4     num_bins K (u32)
 *     12      4     num_frames L (u32)
 *     16      4     sample_rate (u32)
 *     20      4     frame_len (u32)
 *     24      4     hop (u32)
 *     28      ...   speech plane, K*L float32
 *     ...     ...   noise plane, K*L float32
 *
 * Little-endian throughout, planes frame-major (all K bins of frame 0
 * first), values in [0, 1].
 */

import * as fs from 'node:fs';

import { StftParams, numBins } from './dsp.js';

export const MAGIC = 'MFSM';
export const VERSION = 1;
export const HEADER_SIZE = 28;

export class MaskFileError extends Error {}

/** Speech/noise mask planes, frame-major: index [l * numBins + k]. */
export interface MaskPlanes {
  speech: Float64Array;
  noise: Float64Array;
  numBins: number;
  numFrames: number;
}

function checkPlane(plane: Float64Array, what: string): void {
  for (let i = 0; i < plane.length; i++) {
    const v = plane[i];
    if (!Number.isFinite(v) || v < 0.0 || v > 1.0) {
      throw new MaskFileError(`${what} mask out of range`);
    }
  }
}

export function writeMasks(path: string, planes: MaskPlanes, p: StftParams): void {
  const { speech, noise } = planes;
  if (speech.length !== noise.length || speech.length !== planes.numBins * planes.numFrames) {
    throw new MaskFileError('mask planes must share a 2-D shape');
  }
  if (planes.numBins !== numBins(p)) {
    throw new MaskFileError('mask bin count does not match STFT config');
  }
  checkPlane(speech, 'speech');
  checkPlane(noise, 'noise');

  const planeBytes = 4 * speech.length;
  const buf = Buffer.alloc(HEADER_SIZE + 2 * planeBytes);
  buf.write(MAGIC, 0, 'ascii');
  buf.writeUInt32LE(VERSION, 4);
  buf.writeUInt32LE(planes.numBins, 8);
  buf.writeUInt32LE(planes.numFrames, 12);
  buf.writeUInt32LE(p.sampleRate, 16);
  buf.writeUInt32LE(p.frameLen, 20);
  buf.writeUInt32LE(p.hop, 24);
  for (let i = 0; i < speech.length; i++) {
    buf.writeFloatLE(Math.fround(speech[i]), HEADER_SIZE + 4 * i);
  }
  for (let i = 0; i < noise.length; i++) {
    buf.writeFloatLE(Math.fround(noise[i]), HEADER_SIZE + planeBytes + 4 * i);
  }
  fs.writeFileSync(path, buf);
}

export function readMasks(path: string, expect?: StftParams): { planes: MaskPlanes; stft: StftParams } {
  const buf = fs.readFileSync(path);
  if (buf.length < HEADER_SIZE) {
    throw new MaskFileError('truncated header');
  }
  if (buf.toString('ascii', 0, 4) !== MAGIC) {
    throw new MaskFileError('bad magic');
  }
  const version = buf.readUInt32LE(4);
  if (version !== VERSION) {
    throw new MaskFileError(`unsupported version ${version}`);
  }
  const bins = buf.readUInt32LE(8);
  const frames = buf.readUInt32LE(12);
  const rate = buf.readUInt32LE(16);
  const frameLen = buf.readUInt32LE(20);
  const hop = buf.readUInt32LE(24);
  if (Math.min(bins, frames, rate, frameLen, hop) < 1) {
    throw new MaskFileError('non-positive header field');
  }
  if (hop > frameLen || frameLen % hop !== 0) {
    throw new MaskFileError('inconsistent frame_len/hop');
  }
  if (bins !== Math.floor(frameLen / 2) + 1) {
    throw new MaskFileError('bin count inconsistent with frame_len');
  }
  if (expect !== undefined) {
    if (bins !== numBins(expect) || rate !== expect.sampleRate
        || frameLen !== expect.frameLen || hop !== expect.hop) {
      throw new MaskFileError('header does not match expected STFT config');
    }
  }
  const planeBytes = 4 * bins * frames;
  const expected = HEADER_SIZE + 2 * planeBytes;
  if (buf.length < expected) {
    throw new MaskFileError('truncated payload');
  }
  if (buf.length > expected) {
    throw new MaskFileError('trailing data after payload');
  }
  const speech = new Float64Array(bins * frames);
  const noise = new Float64Array(bins * frames);
  for (let i = 0; i < speech.length; i++) {
    speech[i] = buf.readFloatLE(HEADER_SIZE + 4 * i);
  }
  for (let i = 0; i < noise.length; i++) {
    noise[i] = buf.readFloatLE(HEADER_SIZE + planeBytes + 4 * i);
  }
  checkPlane(speech, 'speech');
  checkPlane(noise, 'noise');
  return {
    planes: { speech, noise, numBins: bins, numFrames: frames },
    stft: { sampleRate: rate, frameLen, hop },
  };
}
