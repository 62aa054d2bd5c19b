/**
 * Training loop: ADAM at lr 0.001, gradients divided by their global
 * l2-norm whenever it exceeds 1, at most 100 epochs, early stop once the
 * validation loss has not decreased for 10 consecutive epochs.
 *
 * Loss is the mean-squared error summed over the speech and noise mask
 * planes and averaged over frames and bins: with K bins per plane,
 * loss = (1/(L*K)) * sum_l sum_k [(ex)^2 + (en)^2].  Utterances are
 * batched whole; shorter ones are zero-padded to the batch length and a
 * frame mask keeps the padding out of the loss.
 *
 * The history records end-of-epoch losses in inference mode (dropout off,
 * batch-norm moving stats), so train and validation numbers are the same
 * kind of quantity and neither is inflated by dropout noise.
 */

import * as tf from '@tensorflow/tfjs';

import { Example } from './data.js';
import { NetSpec, buildModel, defaultNetSpec } from './model.js';
import { mulberry32, shuffleInPlace } from './rng.js';

export interface TrainSpec {
  learningRate: number;
  gradNormThreshold: number;
  maxEpochs: number;
  patience: number;
  validationFraction: number;
  batchSize: number;
  /* Optional: stop once the end-of-epoch training loss drops below this
     value.  Lets bounded runs finish as soon as they have provably fit. */
  lossTarget?: number;
  quiet?: boolean;
}

export const defaultTrainSpec: TrainSpec = {
  learningRate: 0.001,
  gradNormThreshold: 1.0,
  maxEpochs: 100,
  patience: 10,
  validationFraction: 0.2,
  batchSize: 10,
};

export function validateTrainSpec(spec: TrainSpec): void {
  if (spec.learningRate <= 0 || spec.gradNormThreshold <= 0) {
    throw new Error('learningRate and gradNormThreshold must be positive');
  }
  if (spec.maxEpochs < 1 || spec.patience < 1 || spec.batchSize < 1) {
    throw new Error('maxEpochs, patience and batchSize must be positive');
  }
  if (!(spec.validationFraction > 0 && spec.validationFraction < 1)) {
    throw new Error('validationFraction must be in (0, 1)');
  }
}

/**
 * Stop signal: true once the validation loss has gone `patience`
 * consecutive epochs without a strict decrease below the best seen.
 */
export class EarlyStopper {
  best = Infinity;
  stale = 0;

  constructor(public readonly patience: number) {}

  update(valLoss: number): boolean {
    if (valLoss < this.best) {
      this.best = valLoss;
      this.stale = 0;
    } else {
      this.stale += 1;
    }
    return this.stale >= this.patience;
  }
}

export interface EpochStats {
  epoch: number;
  trainLoss: number;
  valLoss: number;
}

export interface TrainResult {
  model: tf.LayersModel;
  history: EpochStats[];
  stoppedEarly: boolean;
  epochs: number;
}

interface Batch {
  x: tf.Tensor3D;
  y: tf.Tensor3D;
  frameMask: tf.Tensor3D; // [B, Lmax, 1]
  maskFrames: number; // total real frames in this batch
}

function makeBatch(examples: Example[], inputDim: number, outputDim: number): Batch {
  const b = examples.length;
  const lmax = Math.max(...examples.map((e) => e.numFrames));
  const x = new Float32Array(b * lmax * inputDim);
  const y = new Float32Array(b * lmax * outputDim);
  const m = new Float32Array(b * lmax);
  let maskFrames = 0;
  for (let i = 0; i < b; i++) {
    const e = examples[i];
    x.set(e.features, i * lmax * inputDim);
    y.set(e.targets, i * lmax * outputDim);
    for (let l = 0; l < e.numFrames; l++) m[i * lmax + l] = 1.0;
    maskFrames += e.numFrames;
  }
  return {
    x: tf.tensor3d(x, [b, lmax, inputDim]),
    y: tf.tensor3d(y, [b, lmax, outputDim]),
    frameMask: tf.tensor3d(m, [b, lmax, 1]),
    maskFrames,
  };
}

function disposeBatch(batch: Batch): void {
  batch.x.dispose();
  batch.y.dispose();
  batch.frameMask.dispose();
}

/** Masked loss over one batch: sum of squared errors on real frames,
 * divided by (real frame count * bins per plane). */
function batchLoss(pred: tf.Tensor, batch: Batch, binsPerPlane: number): tf.Scalar {
  return tf.tidy(() => {
    const sq = tf.sub(pred, batch.y).square().mul(batch.frameMask);
    return sq.sum().div(batch.maskFrames * binsPerPlane) as tf.Scalar;
  });
}

/** Dataset-level loss in inference mode, exact over ragged batches. */
export function evalLoss(
  model: tf.LayersModel,
  examples: Example[],
  netSpec: NetSpec,
  batchSize: number,
): number {
  const binsPerPlane = netSpec.outputDim / 2;
  let sqSum = 0.0;
  let frames = 0;
  for (let i = 0; i < examples.length; i += batchSize) {
    const batch = makeBatch(examples.slice(i, i + batchSize), netSpec.inputDim, netSpec.outputDim);
    const part = tf.tidy(() => {
      const pred = model.apply(batch.x, { training: false }) as tf.Tensor;
      return tf.sub(pred, batch.y).square().mul(batch.frameMask).sum();
    });
    sqSum += part.dataSync()[0];
    part.dispose();
    frames += batch.maskFrames;
    disposeBatch(batch);
  }
  return sqSum / (frames * binsPerPlane);
}

export function train(
  examples: Example[],
  netSpec: NetSpec = defaultNetSpec,
  spec: TrainSpec = defaultTrainSpec,
  seed = 0,
): TrainResult {
  validateTrainSpec(spec);
  if (examples.length < 2) {
    throw new Error('need at least 2 utterances to split off a validation set');
  }
  for (const e of examples) {
    if (e.features.length !== e.numFrames * netSpec.inputDim) {
      throw new Error('example feature width does not match the network input');
    }
  }

  const rand = mulberry32(seed);
  const order = shuffleInPlace([...examples.keys()], rand);
  const nVal = Math.max(1, Math.round(spec.validationFraction * examples.length));
  if (nVal >= examples.length) {
    throw new Error('validation split leaves no training utterances');
  }
  const valSet = order.slice(0, nVal).map((i) => examples[i]);
  const trainSet = order.slice(nVal).map((i) => examples[i]);
  const log = spec.quiet ? () => {} : console.log;
  log(`train: ${trainSet.length} utterances, validation: ${valSet.length}, seed ${seed}`);

  const model = buildModel(netSpec, seed);
  const optimizer = tf.train.adam(spec.learningRate);
  // LayerVariable hides its backing tf.Variable from the type defs only
  const vars = model.trainableWeights.map((w) => (w as unknown as { val: tf.Variable }).val);
  const binsPerPlane = netSpec.outputDim / 2;

  const history: EpochStats[] = [];
  const stopper = new EarlyStopper(spec.patience);
  let stoppedEarly = false;
  let epoch = 0;

  for (; epoch < spec.maxEpochs; epoch++) {
    const t0 = Date.now();
    shuffleInPlace(trainSet, rand);
    let stepLossSum = 0.0;
    let steps = 0;
    for (let i = 0; i < trainSet.length; i += spec.batchSize) {
      const batch = makeBatch(trainSet.slice(i, i + spec.batchSize), netSpec.inputDim, netSpec.outputDim);
      const { value, grads } = tf.variableGrads(() => {
        const pred = model.apply(batch.x, { training: true }) as tf.Tensor;
        return batchLoss(pred, batch, binsPerPlane);
      }, vars);
      const loss = value.dataSync()[0];
      value.dispose();
      if (!Number.isFinite(loss)) {
        disposeBatch(batch);
        Object.values(grads).forEach((g) => g.dispose());
        optimizer.dispose();
        throw new Error(
          `non-finite training loss (${loss}) at epoch ${epoch + 1}, batch ${steps + 1}; `
          + 'check the manifest audio for NaN/Inf samples or silent components',
        );
      }

      let normSq = 0.0;
      for (const name of Object.keys(grads)) {
        const part = grads[name].square().sum();
        normSq += part.dataSync()[0];
        part.dispose();
      }
      const norm = Math.sqrt(normSq);
      if (norm > spec.gradNormThreshold) {
        for (const name of Object.keys(grads)) {
          const g = grads[name];
          grads[name] = g.div(norm);
          g.dispose();
        }
      }
      optimizer.applyGradients(Object.keys(grads).map((name) => ({ name, tensor: grads[name] })));
      Object.values(grads).forEach((g) => g.dispose());
      disposeBatch(batch);
      stepLossSum += loss;
      steps += 1;
    }

    const trainLoss = evalLoss(model, trainSet, netSpec, spec.batchSize);
    const valLoss = evalLoss(model, valSet, netSpec, spec.batchSize);
    history.push({ epoch: epoch + 1, trainLoss, valLoss });
    log(
      `epoch ${epoch + 1}/${spec.maxEpochs} | step_loss=${(stepLossSum / steps).toFixed(4)} `
      + `| train=${trainLoss.toFixed(4)} | val=${valLoss.toFixed(4)} `
      + `| ${((Date.now() - t0) / 1000).toFixed(1)}s`,
    );

    if (spec.lossTarget !== undefined && trainLoss < spec.lossTarget) {
      log(`training loss below target ${spec.lossTarget}, stopping`);
      epoch += 1;
      break;
    }
    if (stopper.update(valLoss)) {
      log(`validation loss flat for ${spec.patience} epochs, stopping`);
      stoppedEarly = true;
      epoch += 1;
      break;
    }
  }

  optimizer.dispose();
  return { model, history, stoppedEarly, epochs: epoch };
}
