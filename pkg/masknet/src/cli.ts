/**
 * Command-line front end.
 *
 * Subcommands:
 *   targets   ideal speech/noise masks from true components, as MFSM
 *   train     fit the mask estimator from a dataset manifest
 *   infer     noisy WAV in, estimated MFSM mask file out
 */

import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { initBackend } from './backend.js';
import { saveCheckpoint } from './checkpoint.js';
import { assembleDataset, loadManifest } from './data.js';
import { defaultStft } from './dsp.js';
import { writeMasks } from './mfsm.js';
import { inferToFile } from './infer.js';
import { defaultNetSpec } from './model.js';
import { buildTargets } from './targets.js';
import { defaultTrainSpec, train } from './train.js';
import { readWav } from './wav.js';

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .command(
      'targets',
      'ideal masks from true clean/noise components',
      (y) => y
        .option('clean', { type: 'string', demandOption: true })
        .option('noise', { type: 'string', demandOption: true })
        .option('out', { type: 'string', demandOption: true }),
      (argv) => {
        const clean = readWav(argv.clean, defaultStft.sampleRate).samples;
        const noise = readWav(argv.noise, defaultStft.sampleRate).samples;
        writeMasks(argv.out, buildTargets(clean, noise, defaultStft), defaultStft);
      },
    )
    .command(
      'train',
      'train the mask estimator from a manifest',
      (y) => y
        .option('manifest', { type: 'string', demandOption: true })
        .option('out', { type: 'string', demandOption: true, describe: 'checkpoint path' })
        .option('seed', { type: 'number', default: 0 })
        .option('epochs', { type: 'number', default: defaultTrainSpec.maxEpochs })
        .option('batch', { type: 'number', default: defaultTrainSpec.batchSize })
        .option('backend', { choices: ['wasm', 'cpu'] as const, default: 'wasm' as const }),
      async (argv) => {
        console.log(`backend: ${await initBackend(argv.backend)}`);
        const examples = assembleDataset(loadManifest(argv.manifest), defaultStft);
        console.log(`dataset: ${examples.length} utterances`);
        const spec = { ...defaultTrainSpec, maxEpochs: argv.epochs, batchSize: argv.batch };
        const result = train(examples, defaultNetSpec, spec, argv.seed);
        await saveCheckpoint(argv.out, result.model, defaultNetSpec, defaultStft, result.history);
        const last = result.history[result.history.length - 1];
        console.log(
          `saved ${argv.out} after ${result.epochs} epochs `
          + `(train=${last.trainLoss.toFixed(4)}, val=${last.valLoss.toFixed(4)})`,
        );
      },
    )
    .command(
      'infer',
      'estimate masks for a noisy WAV',
      (y) => y
        .option('model', { type: 'string', demandOption: true, describe: 'checkpoint path' })
        .option('in', { type: 'string', demandOption: true })
        .option('out', { type: 'string', demandOption: true })
        .option('backend', { choices: ['wasm', 'cpu'] as const, default: 'wasm' as const }),
      async (argv) => {
        await initBackend(argv.backend);
        await inferToFile(argv.model, argv.in as string, argv.out);
        console.log(`wrote ${argv.out}`);
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(`error: ${err?.message ?? msg}`);
      process.exit(1);
    })
    .parseAsync();
}

main();
