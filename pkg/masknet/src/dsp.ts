/**
 * STFT analysis matching the mfse engine's conventions: periodic Hann
 * window, un-normalized forward DFT, one-sided spectra, frame l covering
 * samples [l*hop, l*hop + frameLen), trailing partial frames dropped.
 *
 * The engine consumes mask files indexed by (bin, frame), so any frame
 * miscount here would corrupt every mask we emit; keep this file boring.
 */

export interface StftParams {
  sampleRate: number;
  frameLen: number;
  hop: number;
}

export const defaultStft: StftParams = { sampleRate: 16000, frameLen: 64, hop: 16 };

export function numBins(p: StftParams): number {
  return Math.floor(p.frameLen / 2) + 1;
}

export function numFrames(numSamples: number, p: StftParams): number {
  if (numSamples < p.frameLen) return 0;
  return Math.floor((numSamples - p.frameLen) / p.hop) + 1;
}

export function periodicHann(length: number): Float64Array {
  const w = new Float64Array(length);
  for (let i = 0; i < length; i++) {
    w[i] = 0.5 * (1.0 - Math.cos((2.0 * Math.PI * i) / length));
  }
  return w;
}

/** One-sided STFT coefficients, frame-major: index [l * numBins + k]. */
export interface ComplexGrid {
  re: Float64Array;
  im: Float64Array;
  numFrames: number;
  numBins: number;
}

/**
 * STFT of a real signal by direct DFT.  frameLen is 64 here, so the
 * O(K*frameLen) per-frame loop with precomputed twiddle tables is cheap
 * and avoids pulling in an FFT dependency for a 33-bin transform.
 */
export function stft(samples: Float64Array, p: StftParams = defaultStft): ComplexGrid {
  const n = samples.length;
  if (n < p.frameLen) {
    throw new Error('input too short for one analysis frame');
  }
  const frames = numFrames(n, p);
  const bins = numBins(p);
  const win = periodicHann(p.frameLen);

  const cos = new Float64Array(bins * p.frameLen);
  const sin = new Float64Array(bins * p.frameLen);
  for (let k = 0; k < bins; k++) {
    for (let i = 0; i < p.frameLen; i++) {
      const ang = (2.0 * Math.PI * k * i) / p.frameLen;
      cos[k * p.frameLen + i] = Math.cos(ang);
      sin[k * p.frameLen + i] = Math.sin(ang);
    }
  }

  const re = new Float64Array(frames * bins);
  const im = new Float64Array(frames * bins);
  const buf = new Float64Array(p.frameLen);
  for (let l = 0; l < frames; l++) {
    const start = l * p.hop;
    for (let i = 0; i < p.frameLen; i++) {
      buf[i] = samples[start + i] * win[i];
    }
    for (let k = 0; k < bins; k++) {
      let sr = 0.0;
      let si = 0.0;
      const base = k * p.frameLen;
      for (let i = 0; i < p.frameLen; i++) {
        sr += buf[i] * cos[base + i];
        si -= buf[i] * sin[base + i];
      }
      re[l * bins + k] = sr;
      im[l * bins + k] = si;
    }
  }
  return { re, im, numFrames: frames, numBins: bins };
}

/** Magnitudes |Y|, frame-major, same layout as the grid. */
export function magnitudeGrid(g: ComplexGrid): Float64Array {
  const out = new Float64Array(g.re.length);
  for (let i = 0; i < out.length; i++) {
    out[i] = Math.hypot(g.re[i], g.im[i]);
  }
  return out;
}
