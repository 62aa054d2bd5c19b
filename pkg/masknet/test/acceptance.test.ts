/**
 * End-to-end checks against the enhancement engine, announced with a
 * single `[SECONDARY n] PASS/FAIL` line carrying the measured numbers.
 *
 * 9: the trainer overfits a 50-utterance synthetic corpus (final training
 *    loss < 0.02 within 100 epochs), its ideal-mask targets agree with the
 *    engine's oracle masks to 1e-6, and the mask files it emits are
 *    accepted by the engine's reader.  Hard.
 * 10: with that desk-trained model on held-out noise, enhancement driven
 *    by the two-plane SPP mapping should score at least as well as the
 *    one-plane mapping on average.  Desk-scale training variance is high,
 *    so a reversed ordering only logs a warning.
 */

import * as fs from 'node:fs';
import * as path from 'node:path';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { initBackend } from '../src/backend.js';
import { loadCheckpoint, saveCheckpoint } from '../src/checkpoint.js';
import { assembleDataset, loadManifest, mixAtSnr } from '../src/data.js';
import { defaultStft } from '../src/dsp.js';
import { inferToFile, predictMasks } from '../src/infer.js';
import { readMasks } from '../src/mfsm.js';
import { defaultNetSpec } from '../src/model.js';
import { synthBandNoise, synthLowNoise, synthSpeech, synthWhiteNoise } from '../src/synth.js';
import { buildTargets } from '../src/targets.js';
import { defaultTrainSpec, train } from '../src/train.js';
import { readWav, writeWav } from '../src/wav.js';
import { expectEngineOk, makeTmpDir, rmDir, runEngine } from './helpers.js';

const RATE = 16000;
const SNRS = [-5, 0, 5, 10, 15, 20];

let tmp: string;
let ckptPath: string | null = null; // set by criterion 9, reused by 10

beforeAll(async () => {
  await initBackend('wasm');
  tmp = makeTmpDir('accept');
});

afterAll(() => rmDir(tmp));

function announce(line: string): void {
  console.log(line);
}

function mean(xs: number[]): number {
  return xs.reduce((a, b) => a + b, 0) / xs.length;
}

describe('engine interchange acceptance', () => {
  it('[SECONDARY 9] overfits 50 synthetic utterances; targets and emitted masks interchange with the engine', async () => {
    // 50 short clips, two noise colors, SNRs cycling -5..20 dB
    const manifestLines = ['# overfit corpus'];
    for (let i = 0; i < 50; i++) {
      const clean = synthSpeech(0.1, i);
      const noise = (i % 2 === 0 ? synthWhiteNoise : synthLowNoise)(0.2, 100 + i);
      const cleanWav = path.join(tmp, `clean${i}.wav`);
      const noiseWav = path.join(tmp, `noise${i}.wav`);
      writeWav(cleanWav, clean, RATE);
      writeWav(noiseWav, noise, RATE);
      manifestLines.push(
        [cleanWav, noiseWav, String(SNRS[i % SNRS.length]), String(1000 + i)].join('\t'),
      );
    }
    const manifest = path.join(tmp, 'train.tsv');
    fs.writeFileSync(manifest, manifestLines.join('\n') + '\n');

    const examples = assembleDataset(loadManifest(manifest), defaultStft);
    expect(examples.length).toBe(50);

    const t0 = Date.now();
    const r = train(examples, defaultNetSpec, { ...defaultTrainSpec, lossTarget: 0.018 }, 0);
    const minutes = (Date.now() - t0) / 60000;
    const finalTrain = r.history[r.history.length - 1].trainLoss;

    // target parity: identical component files through both implementations
    let worstParity = 0;
    for (const i of [0, 1, 2]) {
      const cleanWav = path.join(tmp, `clean${i}.wav`);
      const cleanQ = readWav(cleanWav, RATE).samples;
      const noiseQ = readWav(path.join(tmp, `noise${i}.wav`), RATE).samples;
      const { noiseUsed } = mixAtSnr(cleanQ, noiseQ, SNRS[i % SNRS.length], 1000 + i);
      const realWav = path.join(tmp, `real${i}.wav`);
      writeWav(realWav, noiseUsed, RATE);

      const oracleFile = path.join(tmp, `oracle${i}.mfsm`);
      expectEngineOk(
        runEngine(['oracle-masks', '--clean', cleanWav, '--noise', realWav, '--out', oracleFile]),
        'oracle-masks',
      );
      const theirs = readMasks(oracleFile).planes;
      const ours = buildTargets(cleanQ, readWav(realWav, RATE).samples, defaultStft);
      expect(theirs.numFrames).toBeGreaterThan(0);
      expect(theirs.numFrames).toBe(ours.numFrames);
      for (let j = 0; j < ours.speech.length; j++) {
        worstParity = Math.max(
          worstParity,
          Math.abs(ours.speech[j] - theirs.speech[j]),
          Math.abs(ours.noise[j] - theirs.noise[j]),
        );
      }
    }

    // emitted masks must clear the engine's reader validations end to end
    const ckpt = path.join(tmp, 'overfit.ckpt');
    await saveCheckpoint(ckpt, r.model, defaultNetSpec, defaultStft, r.history);
    r.model.dispose();

    const noisyWav = path.join(tmp, 'accept9-noisy.wav');
    expectEngineOk(
      runEngine([
        'mix', '--clean', path.join(tmp, 'clean0.wav'), '--noise', path.join(tmp, 'noise0.wav'),
        '--snr', '0', '--seed', '1000', '--out', noisyWav,
      ]),
      'mix',
    );
    const maskFile = path.join(tmp, 'accept9-masks.mfsm');
    await inferToFile(ckpt, noisyWav, maskFile);
    const enhanced = path.join(tmp, 'accept9-enh.wav');
    const enh = runEngine([
      'enhance', '--in', noisyWav, '--out', enhanced,
      '--spp', 'mask-n2', '--masks', maskFile,
    ]);

    const ok = finalTrain < 0.02 && r.epochs <= 100 && worstParity < 1e-6 && enh.status === 0;
    announce(
      `[SECONDARY 9] ${ok ? 'PASS' : 'FAIL'} - train loss ${finalTrain.toFixed(4)} `
      + `after ${r.epochs} epochs (< 0.02 within 100, ${minutes.toFixed(1)} min), `
      + `target parity ${worstParity.toExponential(1)} (< 1e-6), `
      + `engine ${enh.status === 0 ? 'accepted' : 'rejected'} emitted masks`,
    );
    expect(finalTrain).toBeLessThan(0.02);
    expect(r.epochs).toBeLessThanOrEqual(100);
    expect(worstParity).toBeLessThan(1e-6);
    expectEngineOk(enh, 'enhance with emitted masks');
    expect(fs.existsSync(enhanced)).toBe(true);
    ckptPath = ckpt;
  }, 3_600_000);

  it('trained model marks silent input as noise', async () => {
    expect(ckptPath, 'criterion 9 must have produced a checkpoint').not.toBeNull();
    const ckpt = await loadCheckpoint(ckptPath as string);
    const planes = predictMasks(ckpt.model, new Float64Array(8000), ckpt.netSpec, ckpt.stft);
    ckpt.model.dispose();
    const meanNoise = mean(Array.from(planes.noise));
    const meanSpeech = mean(Array.from(planes.speech));
    console.log(
      `silent input: mean noise mask ${meanNoise.toFixed(3)}, `
      + `mean speech mask ${meanSpeech.toFixed(3)}`,
    );
    expect(meanNoise).toBeGreaterThanOrEqual(0.8);
  });

  it('[SECONDARY 10] two-plane SPP mapping scores at least as well as one-plane on held-out noise (soft)', async () => {
    expect(ckptPath, 'criterion 9 must have produced a checkpoint').not.toBeNull();

    // held-out material: resonant band noise (unlike both training colors),
    // longer clips with a 1 s silent lead so the scoring window (which
    // skips the first second) sees fully warmed-up enhancement
    const count = 6;
    const fwOne: number[] = [];
    const fwTwo: number[] = [];
    for (let i = 0; i < count; i++) {
      const speech = synthSpeech(1.2, 200 + i);
      const clean = new Float64Array(RATE + speech.length);
      clean.set(speech, RATE);
      const noise = synthBandNoise(2.4, 300 + i);

      const cleanWav = path.join(tmp, `ho-clean${i}.wav`);
      const noiseWav = path.join(tmp, `ho-noise${i}.wav`);
      const noisyWav = path.join(tmp, `ho-noisy${i}.wav`);
      writeWav(cleanWav, clean, RATE);
      writeWav(noiseWav, noise, RATE);
      expectEngineOk(
        runEngine([
          'mix', '--clean', cleanWav, '--noise', noiseWav,
          '--snr', String(i % 2 === 0 ? 0 : 5), '--seed', String(400 + i), '--out', noisyWav,
        ]),
        'mix',
      );

      const maskFile = path.join(tmp, `ho-masks${i}.mfsm`);
      await inferToFile(ckptPath as string, noisyWav, maskFile);

      for (const [variant, acc] of [['mask-n1', fwOne], ['mask-n2', fwTwo]] as const) {
        const enhanced = path.join(tmp, `ho-enh-${variant}-${i}.wav`);
        expectEngineOk(
          runEngine([
            'enhance', '--in', noisyWav, '--out', enhanced,
            '--filter', 'mfmvdr', '--spp', variant, '--masks', maskFile,
          ]),
          `enhance ${variant}`,
        );
        const report = path.join(tmp, `ho-eval-${variant}-${i}.json`);
        expectEngineOk(
          runEngine([
            'eval', '--clean', cleanWav, '--enhanced', enhanced, '--noisy', noisyWav,
            '--report', report, '--id', `ho${i}`, '--method', variant,
          ]),
          `eval ${variant}`,
        );
        const rows = JSON.parse(fs.readFileSync(report, 'utf-8')) as { fwssnr_out: number }[];
        acc.push(rows[0].fwssnr_out);
      }
      console.log(
        `held-out utt ${i}: one-plane ${fwOne[i].toFixed(2)} dB, two-plane ${fwTwo[i].toFixed(2)} dB`,
      );
    }

    for (const v of [...fwOne, ...fwTwo]) {
      expect(Number.isFinite(v)).toBe(true);
    }
    const meanOne = mean(fwOne);
    const meanTwo = mean(fwTwo);
    const ok = meanTwo >= meanOne;
    announce(
      `[SECONDARY 10] ${ok ? 'PASS' : 'FAIL'} - held-out fwsSNR: two-plane ${meanTwo.toFixed(2)} dB `
      + `vs one-plane ${meanOne.toFixed(2)} dB over ${count} utterances`,
    );
    if (!ok) {
      console.warn(
        '[SECONDARY 10] soft fail: ordering reversed on this desk-scale model; '
        + 'training variance at this corpus size makes the comparison noisy',
      );
    }
  }, 1_200_000);
});
