import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    // the overfit acceptance run trains the full network on wasm; give it
    // room, and keep files sequential so training and the python engine
    // subprocesses do not fight over cores
    testTimeout: 1800000,
    hookTimeout: 600000,
    fileParallelism: false,
  },
});
