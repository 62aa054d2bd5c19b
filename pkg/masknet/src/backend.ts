/**
 * tfjs backend selection.  The wasm backend is several times faster than
 * the plain-JS cpu backend for this model; fall back quietly when its
 * binary cannot be loaded.
 */

import { createRequire } from 'node:module';
import * as path from 'node:path';

import * as tf from '@tensorflow/tfjs';

let initialized: string | null = null;

export async function initBackend(prefer: 'wasm' | 'cpu' = 'wasm'): Promise<string> {
  if (initialized) return initialized;
  if (prefer === 'wasm') {
    try {
      const wasm = await import('@tensorflow/tfjs-backend-wasm');
      const require = createRequire(import.meta.url);
      const dist = path.dirname(require.resolve('@tensorflow/tfjs-backend-wasm'));
      wasm.setWasmPaths(dist + path.sep);
      if (await tf.setBackend('wasm')) {
        await tf.ready();
        initialized = 'wasm';
        return initialized;
      }
    } catch {
      // fall through to cpu
    }
  }
  await tf.setBackend('cpu');
  await tf.ready();
  initialized = 'cpu';
  return initialized;
}
