/**
 * Self-describing single-file checkpoint: one JSON document holding the
 * network spec, the STFT geometry the model was trained against, the loss
 * history, and the serialized tfjs model (topology + base64 weights).
 * Inference reconstructs everything from the file alone.
 */

import * as fs from 'node:fs';

import * as tf from '@tensorflow/tfjs';

import { StftParams } from './dsp.js';
import { NetSpec, validateNetSpec } from './model.js';
import { EpochStats } from './train.js';

export const CHECKPOINT_FORMAT = 'masknet-checkpoint';
export const CHECKPOINT_VERSION = 1;

interface StoredModel {
  topology: unknown;
  weightSpecs: tf.io.WeightsManifestEntry[];
  weightDataB64: string;
}

export interface CheckpointFile {
  format: string;
  version: number;
  netSpec: NetSpec;
  stft: StftParams;
  history: EpochStats[];
  model: StoredModel;
}

export async function saveCheckpoint(
  path: string,
  model: tf.LayersModel,
  netSpec: NetSpec,
  stft: StftParams,
  history: EpochStats[],
): Promise<void> {
  let artifacts: tf.io.ModelArtifacts | null = null;
  await model.save(tf.io.withSaveHandler(async (a) => {
    artifacts = a;
    return { modelArtifactsInfo: { dateSaved: new Date(), modelTopologyType: 'JSON' } };
  }));
  if (!artifacts) {
    throw new Error('model serialization produced no artifacts');
  }
  const got: tf.io.ModelArtifacts = artifacts;
  const weightData = got.weightData as ArrayBuffer;
  const doc: CheckpointFile = {
    format: CHECKPOINT_FORMAT,
    version: CHECKPOINT_VERSION,
    netSpec,
    stft,
    history,
    model: {
      topology: got.modelTopology,
      weightSpecs: got.weightSpecs ?? [],
      weightDataB64: Buffer.from(weightData).toString('base64'),
    },
  };
  fs.writeFileSync(path, JSON.stringify(doc));
}

export interface LoadedCheckpoint {
  model: tf.LayersModel;
  netSpec: NetSpec;
  stft: StftParams;
  history: EpochStats[];
}

export async function loadCheckpoint(path: string): Promise<LoadedCheckpoint> {
  const doc = JSON.parse(fs.readFileSync(path, 'utf-8')) as CheckpointFile;
  if (doc.format !== CHECKPOINT_FORMAT) {
    throw new Error(`not a masknet checkpoint: ${path}`);
  }
  if (doc.version !== CHECKPOINT_VERSION) {
    throw new Error(`unsupported checkpoint version ${doc.version}`);
  }
  validateNetSpec(doc.netSpec);
  const raw = Buffer.from(doc.model.weightDataB64, 'base64');
  const weightData = raw.buffer.slice(raw.byteOffset, raw.byteOffset + raw.byteLength);
  const model = await tf.loadLayersModel(tf.io.fromMemory({
    modelTopology: doc.model.topology as {},
    weightSpecs: doc.model.weightSpecs,
    weightData,
  }));
  return { model, netSpec: doc.netSpec, stft: doc.stft, history: doc.history };
}
