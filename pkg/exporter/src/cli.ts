#!/usr/bin/env node
/**
 * Command line: ddhqa-export --out clips.jsonl [--fps N] [--seed N] inputs...
 *
 * Inputs are .y4m files or PNG frame directories. Exit code 0 when at
 * least one video exported, 1 when none did, 2 on usage errors.
 */

import { runExport } from './export';

function usage(): never {
  console.error(
    'usage: ddhqa-export --out <clips.jsonl> [--fps N] [--seed N] <video.y4m|frame_dir> ...'
  );
  process.exit(2);
}

async function main(): Promise<number> {
  const argv = process.argv.slice(2);
  let out: string | undefined;
  let fps: number | undefined;
  let seed = 0;
  const inputs: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === '--out') out = argv[++i];
    else if (arg === '--fps') fps = Number(argv[++i]);
    else if (arg === '--seed') seed = Number(argv[++i]);
    else if (arg === '--help' || arg === '-h') usage();
    else if (arg.startsWith('--')) usage();
    else inputs.push(arg);
  }
  if (!out || !inputs.length || (fps !== undefined && !(fps > 0)) || !Number.isInteger(seed)) {
    usage();
  }

  const result = await runExport({ inputs, outputPath: out, fps, seed });
  for (const failure of result.failures) {
    console.error(`warning: ${failure.input}: ${failure.error}`);
  }
  console.log(
    `wrote ${result.records.length} clip records (d_s=${result.dS}, d_t=${result.dT}) to ${out}`
  );
  return result.records.length > 0 ? 0 : 1;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
);
