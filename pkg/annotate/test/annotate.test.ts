import { spawnSync } from 'node:child_process'
import * as fs from 'node:fs'
import * as os from 'node:os'
import * as path from 'node:path'

import { afterAll, beforeAll, describe, expect, it } from 'vitest'

import { annotateCorpus, type AnnotationJob } from '../src/annotate.js'

let workdir: string

beforeAll(() => {
  workdir = fs.mkdtempSync(path.join(os.tmpdir(), 'annotate-test-'))
})

afterAll(() => {
  fs.rmSync(workdir, { recursive: true, force: true })
})

const TOPICS = [
  'ate a juicy piece of pizza',
  'went to a concert with friends',
  'got a promotion at work',
  'adopted a cat and he settled in',
  'finally finished reading my book',
  'won the game with my team',
  'listened to my favorite band',
  'took a long nap in the afternoon',
]

function happyCsv(rows: number): string {
  const lines = ['hmid,wid,reflection_period,cleaned_hm']
  for (let i = 0; i < rows; i++) {
    const topic = TOPICS[i % TOPICS.length]
    const text = i % 7 === 0
      ? `"I ${topic}. It made me really happy, honestly!"`
      : `I ${topic} today.`
    lines.push(`hm${i + 1},w${i % 37},24h,${text}`)
  }
  return lines.join('\n') + '\n'
}

function job(over: Partial<AnnotationJob>): AnnotationJob {
  return {
    inputPath: path.join(workdir, 'in.csv'),
    kind: 'happy_csv',
    outputPath: path.join(workdir, 'out.jsonl'),
    encoderId: 'hash://64',
    batchSize: 32,
    split: true,
    ...over,
  }
}

function readOutput(file: string): { header: string; records: any[] } {
  const lines = fs.readFileSync(file, 'utf-8').trimEnd().split('\n')
  return {
    header: lines[0],
    records: lines.slice(1).map((line) => JSON.parse(line)),
  }
}

describe('annotateCorpus on a 500-row happy-moment CSV', () => {
  const input = () => path.join(workdir, 'happy.csv')
  const output = () => path.join(workdir, 'happy.jsonl')

  beforeAll(() => {
    fs.writeFileSync(input(), happyCsv(500))
    const report = annotateCorpus(job({ inputPath: input(), outputPath: output() }))
    expect(report.written).toBeGreaterThanOrEqual(500)
  })

  it('writes a header recording encoder id and dimension', () => {
    const { header } = readOutput(output())
    expect(header).toBe('# encoder=hash://64 dim=64')
  })

  it('emits well-formed labeled-positive records with constant dimension', () => {
    const { records } = readOutput(output())
    expect(records.length).toBeGreaterThanOrEqual(500)
    for (const record of records) {
      expect(record.pu_source).toBe('labeled_positive')
      expect(record.subgroup).toBeNull()
      expect(record.tokens.length).toBeGreaterThan(0)
      expect(record.embedding.length).toBe(64)
      expect(typeof record.id).toBe('string')
      expect(typeof record.user_id).toBe('string')
    }
    expect(new Set(records.map((r) => r.id)).size).toBe(records.length)
  })

  it('re-encodes identically on a second run', () => {
    const second = path.join(workdir, 'happy2.jsonl')
    annotateCorpus(job({ inputPath: input(), outputPath: second }))
    expect(fs.readFileSync(second, 'utf-8')).toBe(fs.readFileSync(output(), 'utf-8'))
    const a = readOutput(output()).records
    const b = readOutput(second).records
    for (let i = 0; i < a.length; i++) {
      for (let k = 0; k < 64; k++) {
        expect(Math.abs(a[i].embedding[k] - b[i].embedding[k])).toBeLessThan(1e-6)
      }
    }
  })

  it('passes the consuming toolkit loader with zero errors', () => {
    const script = [
      'import json, sys',
      'from momentminer import load_corpus',
      'c = load_corpus(sys.argv[1])',
      'print(json.dumps({',
      '    "n": len(c.records),',
      '    "dim": c.embedding_dim,',
      '    "tokens_ok": all(len(r.tokens) > 0 for r in c.records),',
      '    "labeled": all(r.pu_source.value == "labeled_positive" for r in c.records),',
      '}))',
    ].join('\n')
    const proc = spawnSync('python3', ['-c', script, output()], { encoding: 'utf-8' })
    expect(proc.status, proc.stderr).toBe(0)
    const summary = JSON.parse(proc.stdout)
    expect(summary.n).toBeGreaterThanOrEqual(500)
    expect(summary.dim).toBe(64)
    expect(summary.tokens_ok).toBe(true)
    expect(summary.labeled).toBe(true)
  })
})

describe('annotateCorpus on post dumps', () => {
  it('keeps subgroups and marks records unlabeled', () => {
    const input = path.join(workdir, 'posts.jsonl')
    const output = path.join(workdir, 'posts.out.jsonl')
    fs.writeFileSync(input, [
      JSON.stringify({ id: 'p1', user_id: 'u1', subgroup: 'depression',
                       text: 'I adopted a cat. He settled in.' }),
      JSON.stringify({ id: 'p2', user_id: 'u2', subgroup: 'control',
                       body: 'I visited Japan recently.' }),
      '{broken json',
      JSON.stringify({ id: 'p3', user_id: 'u3', subgroup: 'control', text: '   ' }),
    ].join('\n'))
    const report = annotateCorpus(job({ inputPath: input, kind: 'posts_jsonl',
                                        outputPath: output }))
    const { records } = readOutput(output)
    expect(records.map((r) => r.id)).toEqual(['p1_s1', 'p1_s2', 'p2'])
    expect(records[0].subgroup).toBe('depression')
    expect(records[2].subgroup).toBe('control')
    expect(records.every((r) => r.pu_source === 'unlabeled')).toBe(true)
    expect(report.warnings.length).toBe(2) // broken json + empty text
  })

  it('keeps rows whole when splitting is disabled', () => {
    const input = path.join(workdir, 'nosplit.jsonl')
    const output = path.join(workdir, 'nosplit.out.jsonl')
    fs.writeFileSync(input, JSON.stringify({
      id: 'p1', user_id: 'u1', subgroup: 'control',
      text: 'One here. Two there.',
    }) + '\n')
    annotateCorpus(job({ inputPath: input, kind: 'posts_jsonl',
                         outputPath: output, split: false }))
    const { records } = readOutput(output)
    expect(records.length).toBe(1)
    expect(records[0].text).toBe('One here. Two there.')
  })
})

describe('edge cases', () => {
  it('writes an empty corpus plus a warning for empty input', () => {
    const input = path.join(workdir, 'empty.csv')
    const output = path.join(workdir, 'empty.out.jsonl')
    fs.writeFileSync(input, 'hmid,wid,cleaned_hm\n')
    const report = annotateCorpus(job({ inputPath: input, outputPath: output }))
    expect(report.written).toBe(0)
    expect(report.warnings.some((w) => w.includes('no usable rows'))).toBe(true)
    const { header, records } = readOutput(output)
    expect(header).toContain('encoder=hash://64')
    expect(records).toEqual([])
  })

  it('skips duplicate ids with a warning', () => {
    const input = path.join(workdir, 'dups.csv')
    const output = path.join(workdir, 'dups.out.jsonl')
    fs.writeFileSync(input,
      'hmid,wid,cleaned_hm\nhm1,w1,I ate pizza today.\nhm1,w1,I ate pizza today.\n')
    const report = annotateCorpus(job({ inputPath: input, outputPath: output }))
    expect(readOutput(output).records.length).toBe(1)
    expect(report.warnings.some((w) => w.includes('duplicate id'))).toBe(true)
  })

  it('fails fast on unknown encoders', () => {
    expect(() => annotateCorpus(job({ encoderId: 'bert-base-uncased' })))
      .toThrow(/cannot load encoder/)
  })

  it('fails when the requested text column is missing', () => {
    const input = path.join(workdir, 'badcol.csv')
    fs.writeFileSync(input, 'a,b\n1,2\n')
    expect(() => annotateCorpus(job({ inputPath: input, textColumn: 'nope' })))
      .toThrow(/no "nope" column/)
  })
})
