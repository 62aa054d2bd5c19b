/**
 * Synthetic desk-scale audio: harmonic speech-like clips and a few noise
 * colors.  Real speech corpora are licensed, so training demos and tests
 * build their material from these generators instead.  All output is
 * seeded and deterministic.
 */

import { mulberry32, randn } from './rng.js';

/**
 * Speech-like clip: drifting-pitch harmonic series under a syllabic
 * amplitude envelope, with a short silent head and tail.  Peak-normalized
 * to 0.5.
 */
export function synthSpeech(seconds: number, seed: number, rate = 16000): Float64Array {
  const n = Math.round(seconds * rate);
  const rand = mulberry32(seed * 2654435761 + 1);
  const out = new Float64Array(n);

  const f0Base = 95 + 110 * rand();
  const f0Drift = 0.15 + 0.2 * rand();
  const syllableRate = 3.5 + 3.0 * rand();
  const syllablePhase = 2 * Math.PI * rand();
  const nHarm = 12;
  const amps = new Float64Array(nHarm);
  for (let h = 0; h < nHarm; h++) {
    // crude formant coloring on top of a 1/h^1.5 rolloff
    const freqKhz = (f0Base * (h + 1)) / 1000;
    const formant = 1.0 + 1.5 * Math.exp(-((freqKhz - 0.6) ** 2) / 0.18)
      + 0.8 * Math.exp(-((freqKhz - 1.9) ** 2) / 0.5);
    amps[h] = formant / Math.pow(h + 1, 1.5);
  }

  const head = Math.round(0.1 * n);
  const tail = Math.round(0.1 * n);
  let phase = 2 * Math.PI * rand();
  let peak = 0.0;
  for (let i = 0; i < n; i++) {
    const t = i / rate;
    const f0 = f0Base * (1 + f0Drift * Math.sin(2 * Math.PI * 1.3 * t + syllablePhase));
    phase += (2 * Math.PI * f0) / rate;
    let s = 0.0;
    for (let h = 0; h < nHarm; h++) {
      s += amps[h] * Math.sin((h + 1) * phase);
    }
    const syllable = 0.5 * (1 - Math.cos(2 * Math.PI * syllableRate * t + syllablePhase));
    let edge = 1.0;
    if (i < head) edge = i / head;
    else if (i >= n - tail) edge = (n - 1 - i) / tail;
    out[i] = s * (0.25 + 0.75 * syllable) * edge;
    peak = Math.max(peak, Math.abs(out[i]));
  }
  if (peak > 0) {
    for (let i = 0; i < n; i++) out[i] *= 0.5 / peak;
  }
  return out;
}

/** White Gaussian noise, sigma scaled so int16 writes do not clip. */
export function synthWhiteNoise(seconds: number, seed: number, rate = 16000): Float64Array {
  const n = Math.round(seconds * rate);
  const rand = mulberry32(seed * 2246822519 + 3);
  const out = new Float64Array(n);
  for (let i = 0; i < n; i++) out[i] = 0.12 * randn(rand);
  return out;
}

/** Low-tilted noise: one-pole lowpassed white, RMS-matched to the white
 * generator. */
export function synthLowNoise(seconds: number, seed: number, rate = 16000): Float64Array {
  const n = Math.round(seconds * rate);
  const rand = mulberry32(seed * 3266489917 + 7);
  const out = new Float64Array(n);
  let y = 0.0;
  let energy = 0.0;
  for (let i = 0; i < n; i++) {
    y = 0.9 * y + randn(rand);
    out[i] = y;
    energy += y * y;
  }
  const rms = Math.sqrt(energy / n);
  for (let i = 0; i < n; i++) out[i] *= 0.12 / rms;
  return out;
}

/** Resonant mid-band noise (two-pole around 2.5 kHz); spectrally unlike
 * both training colors, for held-out evaluation. */
export function synthBandNoise(seconds: number, seed: number, rate = 16000): Float64Array {
  const n = Math.round(seconds * rate);
  const rand = mulberry32(seed * 668265263 + 11);
  const out = new Float64Array(n);
  const r = 0.92;
  const theta = (2 * Math.PI * 2500) / rate;
  const a1 = 2 * r * Math.cos(theta);
  const a2 = -r * r;
  let y1 = 0.0;
  let y2 = 0.0;
  let energy = 0.0;
  for (let i = 0; i < n; i++) {
    const y = randn(rand) + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    out[i] = y;
    energy += y * y;
  }
  const rms = Math.sqrt(energy / n);
  for (let i = 0; i < n; i++) out[i] *= 0.12 / rms;
  return out;
}
