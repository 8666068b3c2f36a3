#!/usr/bin/env node
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { ColorThresholdBackend } from './backend';
import { exportMasks } from './exporter';
import { exportLandmarks } from './landmarks';
import { parsePrompts } from './types';

function run(): number {
  let failed = false;
  yargs(hideBin(process.argv))
    .scriptName('segadapter')
    .command(
      'export',
      'segment a clip and export label masks + manifest + palette',
      (y) =>
        y
          .option('video', { type: 'string', demandOption: true, describe: 'directory of frame PNGs' })
          .option('prompts', {
            type: 'string',
            demandOption: true,
            describe: 'keyword groups, e.g. "hair,skin;t-shirt"',
          })
          .option('out', { type: 'string', demandOption: true, describe: 'output directory' })
          .option('stride', { type: 'number', default: 1, describe: 'keep every Nth frame' })
          .option('tolerance', {
            type: 'number',
            default: 80,
            describe: 'color distance threshold of the built-in backend',
          }),
      (argv) => {
        const spec = { prompts: parsePrompts(argv.prompts), frameStride: argv.stride };
        const summary = exportMasks(argv.video, spec, argv.out, new ColorThresholdBackend(argv.tolerance));
        console.log(
          `wrote ${summary.framesWritten} mask frames, ${summary.manifest.length} labels to ${argv.out}`,
        );
      },
    )
    .command(
      'landmarks',
      'detect one face per frame and export landmarks.json',
      (y) =>
        y
          .option('video', { type: 'string', demandOption: true, describe: 'directory of frame PNGs' })
          .option('out', { type: 'string', demandOption: true, describe: 'landmarks.json path' }),
      (argv) => {
        const summary = exportLandmarks(argv.video, argv.out);
        console.log(`found faces in ${summary.facesFound} of ${summary.framesWritten} frames`);
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(`error: ${err ? err.message : msg}`);
      failed = true;
    })
    .parseSync();
  return failed ? 1 : 0;
}

process.exitCode = run();
