/**
 * Dataset assembly from a manifest of (clean, noise, snr, seed) lines.
 *
 * Each line mixes a seeded segment of the noise file into the clean file
 * at an exact broadband SNR, then derives per-frame features (noisy STFT
 * magnitudes) and targets (speech/noise ratio masks from the true
 * components).  One manifest line, one training example, whole utterance.
 */

import * as fs from 'node:fs';

import { StftParams, defaultStft, magnitudeGrid, numBins, stft } from './dsp.js';
import { mulberry32, randInt } from './rng.js';
import { buildTargets } from './targets.js';
import { readWav } from './wav.js';

export interface ManifestEntry {
  clean: string;
  noise: string;
  snrDb: number;
  seed: number;
}

export function parseManifest(text: string): ManifestEntry[] {
  const entries: ManifestEntry[] = [];
  const lines = text.split('\n');
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === '' || line.startsWith('#')) continue;
    const fields = lines[i].replace(/\r$/, '').split('\t');
    if (fields.length !== 4) {
      throw new Error(`manifest line ${i + 1}: expected clean<TAB>noise<TAB>snr_db<TAB>seed`);
    }
    const snrDb = Number(fields[2]);
    const seed = Number(fields[3]);
    if (!Number.isFinite(snrDb)) {
      throw new Error(`manifest line ${i + 1}: bad snr_db ${fields[2]}`);
    }
    if (!Number.isInteger(seed)) {
      throw new Error(`manifest line ${i + 1}: bad seed ${fields[3]}`);
    }
    entries.push({ clean: fields[0], noise: fields[1], snrDb, seed });
  }
  if (entries.length === 0) {
    throw new Error('manifest lists no utterances');
  }
  return entries;
}

export function loadManifest(path: string): ManifestEntry[] {
  return parseManifest(fs.readFileSync(path, 'utf-8'));
}

/**
 * Mix a seeded noise segment into clean speech at an exact broadband SNR.
 * Returns the mixture and the scaled noise realization actually added
 * (targets need the true components).
 */
export function mixAtSnr(
  clean: Float64Array,
  noise: Float64Array,
  snrDb: number,
  seed: number,
): { noisy: Float64Array; noiseUsed: Float64Array } {
  const n = clean.length;
  if (noise.length < n) {
    throw new Error('noise must be at least as long as clean');
  }
  let cleanEnergy = 0.0;
  for (let i = 0; i < n; i++) cleanEnergy += clean[i] * clean[i];
  if (cleanEnergy <= 0.0) {
    throw new Error('silent clean signal');
  }
  const rand = mulberry32(seed);
  const offset = randInt(rand, 0, noise.length - n + 1);
  let segEnergy = 0.0;
  for (let i = 0; i < n; i++) {
    const v = noise[offset + i];
    segEnergy += v * v;
  }
  if (segEnergy <= 0.0) {
    throw new Error('silent noise segment');
  }
  const scale = Math.sqrt(cleanEnergy / (segEnergy * Math.pow(10.0, snrDb / 10.0)));
  const noiseUsed = new Float64Array(n);
  const noisy = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    noiseUsed[i] = noise[offset + i] * scale;
    noisy[i] = clean[i] + noiseUsed[i];
  }
  return { noisy, noiseUsed };
}

/**
 * One whole utterance: per-frame features (K magnitudes) and targets
 * (speech mask then noise mask, 2K values).
 */
export interface Example {
  features: Float32Array; // [numFrames * K]
  targets: Float32Array; // [numFrames * 2K]
  numFrames: number;
}

export function exampleFromComponents(
  clean: Float64Array,
  noiseUsed: Float64Array,
  p: StftParams = defaultStft,
): Example {
  const noisy = new Float64Array(clean.length);
  for (let i = 0; i < clean.length; i++) noisy[i] = clean[i] + noiseUsed[i];
  const mags = magnitudeGrid(stft(noisy, p));
  const masks = buildTargets(clean, noiseUsed, p);
  const k = numBins(p);
  const frames = masks.numFrames;
  const features = new Float32Array(mags);
  const targets = new Float32Array(frames * 2 * k);
  for (let l = 0; l < frames; l++) {
    for (let b = 0; b < k; b++) {
      targets[l * 2 * k + b] = Math.fround(masks.speech[l * k + b]);
      targets[l * 2 * k + k + b] = Math.fround(masks.noise[l * k + b]);
    }
  }
  return { features, targets, numFrames: frames };
}

export function exampleFromEntry(entry: ManifestEntry, p: StftParams = defaultStft): Example {
  const clean = readWav(entry.clean, p.sampleRate).samples;
  const noise = readWav(entry.noise, p.sampleRate).samples;
  const { noiseUsed } = mixAtSnr(clean, noise, entry.snrDb, entry.seed);
  return exampleFromComponents(clean, noiseUsed, p);
}

export function assembleDataset(entries: ManifestEntry[], p: StftParams = defaultStft): Example[] {
  return entries.map((e) => exampleFromEntry(e, p));
}
