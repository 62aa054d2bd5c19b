/**
 * Network architecture: 33 magnitude features per frame into a BLSTM with
 * 256 units per direction, two 513-unit fully-connected layers, and a
 * 66-unit sigmoid output holding the speech mask (first 33) and noise
 * mask (last 33) side by side.
 *
 * Batch normalization sits on the input and before each fully-connected
 * ReLU; the output layer keeps a bare sigmoid so the masks are in [0, 1]
 * by construction.  All weights draw from uniform(-a, a) with
 * a = sqrt(6 / (n_in + n_out)) and all biases start at zero, including
 * the LSTM forget gate (unitForgetBias off).
 */

import * as tf from '@tensorflow/tfjs';

export interface NetSpec {
  inputDim: number;
  blstmUnits: number;
  fc1: number;
  fc2: number;
  outputDim: number;
  dropout: number;
  /* Moving-stat momentum for the batch-norm layers.  Desk-scale runs see
     only a handful of batches per epoch, so the framework-default 0.99
     would leave inference statistics stale for hundreds of epochs. */
  bnMomentum: number;
}

export const defaultNetSpec: NetSpec = {
  inputDim: 33,
  blstmUnits: 256,
  fc1: 513,
  fc2: 513,
  outputDim: 66,
  dropout: 0.4,
  bnMomentum: 0.9,
};

export function validateNetSpec(spec: NetSpec): void {
  if (spec.outputDim !== 2 * spec.inputDim) {
    throw new Error('outputDim must be twice inputDim (speech + noise planes)');
  }
  if (spec.inputDim < 1 || spec.blstmUnits < 1 || spec.fc1 < 1 || spec.fc2 < 1) {
    throw new Error('layer sizes must be positive');
  }
  if (!(spec.dropout >= 0 && spec.dropout < 1)) {
    throw new Error('dropout must be in [0, 1)');
  }
  if (!(spec.bnMomentum > 0 && spec.bnMomentum < 1)) {
    throw new Error('bnMomentum must be in (0, 1)');
  }
}

export function buildModel(spec: NetSpec, seed: number): tf.LayersModel {
  validateNetSpec(spec);
  const glorot = (s: number) => tf.initializers.glorotUniform({ seed: s });
  const model = tf.sequential();
  model.add(tf.layers.batchNormalization({
    inputShape: [null, spec.inputDim],
    momentum: spec.bnMomentum,
  }));
  model.add(tf.layers.bidirectional({
    layer: tf.layers.lstm({
      units: spec.blstmUnits,
      returnSequences: true,
      activation: 'tanh',
      kernelInitializer: glorot(seed),
      recurrentInitializer: glorot(seed + 1),
      biasInitializer: 'zeros',
      unitForgetBias: false,
    }) as tf.layers.Layer as tf.RNN,
    mergeMode: 'concat',
  }));
  model.add(tf.layers.dropout({ rate: spec.dropout }));
  model.add(tf.layers.dense({
    units: spec.fc1,
    kernelInitializer: glorot(seed + 2),
    biasInitializer: 'zeros',
  }));
  model.add(tf.layers.batchNormalization({ momentum: spec.bnMomentum }));
  model.add(tf.layers.activation({ activation: 'relu' }));
  model.add(tf.layers.dropout({ rate: spec.dropout }));
  model.add(tf.layers.dense({
    units: spec.fc2,
    kernelInitializer: glorot(seed + 3),
    biasInitializer: 'zeros',
  }));
  model.add(tf.layers.batchNormalization({ momentum: spec.bnMomentum }));
  model.add(tf.layers.activation({ activation: 'relu' }));
  model.add(tf.layers.dropout({ rate: spec.dropout }));
  model.add(tf.layers.dense({
    units: spec.outputDim,
    activation: 'sigmoid',
    kernelInitializer: glorot(seed + 4),
    biasInitializer: 'zeros',
  }));
  return model;
}

export function countParams(model: tf.LayersModel): number {
  let n = 0;
  for (const w of model.trainableWeights) {
    let size = 1;
    for (const d of w.shape) size *= d ?? 1;
    n += size;
  }
  return n;
}
