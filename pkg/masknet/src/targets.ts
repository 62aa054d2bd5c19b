/**
 * Training targets: square-root energy-ratio masks from the true clean
 * and noise components, the same quantity the engine's ideal-mask oracle
 * computes.  Per bin M_X = sqrt(|X|^2 / (|X|^2 + |N|^2)) and the noise
 * counterpart, so the squared pair sums to 1; bins where both components
 * are exactly zero map to 1/sqrt(2) in both planes to preserve that
 * identity.
 */

import { StftParams, defaultStft, stft } from './dsp.js';
import { MaskPlanes } from './mfsm.js';

export function buildTargets(
  clean: Float64Array,
  noise: Float64Array,
  p: StftParams = defaultStft,
): MaskPlanes {
  if (clean.length !== noise.length) {
    throw new Error('clean/noise length mismatch');
  }
  const cg = stft(clean, p);
  const ng = stft(noise, p);
  const n = cg.re.length;
  const speech = new Float64Array(n);
  const noiseM = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    const px = cg.re[i] * cg.re[i] + cg.im[i] * cg.im[i];
    const pn = ng.re[i] * ng.re[i] + ng.im[i] * ng.im[i];
    const total = px + pn;
    if (total === 0.0) {
      speech[i] = Math.SQRT1_2;
      noiseM[i] = Math.SQRT1_2;
    } else {
      speech[i] = Math.min(Math.sqrt(px / total), 1.0);
      noiseM[i] = Math.min(Math.sqrt(pn / total), 1.0);
    }
  }
  return { speech, noise: noiseM, numBins: cg.numBins, numFrames: cg.numFrames };
}
