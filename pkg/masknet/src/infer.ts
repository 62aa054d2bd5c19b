/**
 * Inference: noisy WAV in, MFSM mask file out.  Features are the noisy
 * STFT magnitudes; the network output frame count must equal the frame
 * count the engine will compute for the same audio, checked before
 * anything is written.
 */

import * as tf from '@tensorflow/tfjs';

import { loadCheckpoint } from './checkpoint.js';
import { StftParams, magnitudeGrid, numBins, numFrames, stft } from './dsp.js';
import { MaskPlanes, writeMasks } from './mfsm.js';
import { NetSpec } from './model.js';
import { readWav } from './wav.js';

export function predictMasks(
  model: tf.LayersModel,
  samples: Float64Array,
  netSpec: NetSpec,
  p: StftParams,
): MaskPlanes {
  const k = numBins(p);
  if (netSpec.inputDim !== k) {
    throw new Error(`model expects ${netSpec.inputDim} bins, STFT config yields ${k}`);
  }
  const mags = magnitudeGrid(stft(samples, p));
  const frames = mags.length / k;
  const out = tf.tidy(() => {
    const x = tf.tensor3d(new Float32Array(mags), [1, frames, k]);
    return (model.apply(x, { training: false }) as tf.Tensor).reshape([frames, 2 * k]);
  });
  const flat = out.dataSync() as Float32Array;
  out.dispose();

  const speech = new Float64Array(frames * k);
  const noise = new Float64Array(frames * k);
  for (let l = 0; l < frames; l++) {
    for (let b = 0; b < k; b++) {
      // sigmoid output; clamp float32 rounding just in case
      speech[l * k + b] = Math.min(1.0, Math.max(0.0, flat[l * 2 * k + b]));
      noise[l * k + b] = Math.min(1.0, Math.max(0.0, flat[l * 2 * k + k + b]));
    }
  }
  return { speech, noise, numBins: k, numFrames: frames };
}

export async function inferToFile(
  checkpointPath: string,
  wavPath: string,
  outPath: string,
): Promise<MaskPlanes> {
  const ckpt = await loadCheckpoint(checkpointPath);
  const { samples } = readWav(wavPath, ckpt.stft.sampleRate);
  const planes = predictMasks(ckpt.model, samples, ckpt.netSpec, ckpt.stft);
  const expect = numFrames(samples.length, ckpt.stft);
  if (planes.numFrames !== expect) {
    throw new Error(
      `mask frame count ${planes.numFrames} does not match the engine's ${expect} for this audio`,
    );
  }
  writeMasks(outPath, planes, ckpt.stft);
  ckpt.model.dispose();
  return planes;
}
