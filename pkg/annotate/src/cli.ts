#!/usr/bin/env node
/**
 * CLI for the corpus annotator: raw dataset in, wire-format corpus out.
 */

import yargs from 'yargs'
import { hideBin } from 'yargs/helpers'

import { annotateCorpus, type InputKind } from './annotate.js'

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .scriptName('momentminer-annotate')
    .usage('$0 --input FILE --kind happy_csv|posts_jsonl --out FILE')
    .option('input', { type: 'string', demandOption: true,
                       describe: 'raw dataset (CSV or JSONL)' })
    .option('kind', { choices: ['happy_csv', 'posts_jsonl'] as const,
                      demandOption: true,
                      describe: 'happy-moment CSV or per-user post dump' })
    .option('out', { type: 'string', demandOption: true,
                     describe: 'wire-format output path' })
    .option('encoder', { type: 'string', default: 'hash://384',
                         describe: 'encoder model id (recorded in the header)' })
    .option('batch-size', { type: 'number', default: 64 })
    .option('split', { type: 'boolean', default: true,
                       describe: 'split multi-sentence texts (--no-split to keep rows whole)' })
    .option('text-column', { type: 'string',
                             describe: 'CSV column holding the text' })
    .option('id-column', { type: 'string' })
    .option('user-column', { type: 'string' })
    .strict()
    .parse()

  try {
    const report = annotateCorpus({
      inputPath: args.input,
      kind: args.kind as InputKind,
      outputPath: args.out,
      encoderId: args.encoder,
      batchSize: args['batch-size'],
      split: args.split,
      textColumn: args['text-column'],
      idColumn: args['id-column'],
      userColumn: args['user-column'],
    })
    for (const warning of report.warnings.slice(0, 20)) {
      console.warn(`warning: ${warning}`)
    }
    if (report.warnings.length > 20) {
      console.warn(`... and ${report.warnings.length - 20} more warnings`)
    }
    console.log(
      `wrote ${report.written} records to ${args.out} ` +
      `(encoder ${report.encoderId}, dim ${report.dim}, ` +
      `${report.warnings.length} skipped/warned)`)
    return 0
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`)
    return 1
  }
}

import { pathToFileURL } from 'node:url'

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code
  })
}
