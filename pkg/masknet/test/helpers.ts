/**
 * Shared test plumbing: temp dirs, WAV fixtures, and the mfse engine CLI.
 * The engine is only ever touched through its public surfaces: the
 * command line, WAV files and MFSM mask files.
 */

import { spawnSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';

export function makeTmpDir(tag: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), `masknet-${tag}-`));
}

export function rmDir(dir: string): void {
  fs.rmSync(dir, { recursive: true, force: true });
}

export interface CliResult {
  status: number;
  stdout: string;
  stderr: string;
}

/** Run the enhancement engine's CLI; throws only on spawn failure. */
export function runEngine(args: string[]): CliResult {
  const r = spawnSync('python3', ['-m', 'mfse.cli', ...args], {
    encoding: 'utf-8',
    timeout: 120000,
  });
  if (r.error) {
    throw r.error;
  }
  return { status: r.status ?? -1, stdout: r.stdout, stderr: r.stderr };
}

export function expectEngineOk(r: CliResult, what: string): void {
  if (r.status !== 0) {
    throw new Error(`${what} failed (rc=${r.status}): ${r.stderr.slice(0, 500)}`);
  }
}
