/**
 * Annotation jobs: read a raw dataset (happy-moment CSV or per-user post
 * dump), split into sentences, tokenize/tag/lemmatize, embed, and write
 * the corpus wire format.  Malformed rows are skipped and counted, never
 * fatal; output record order follows input order.
 */

import * as fs from 'node:fs'
import Papa from 'papaparse'
import { z } from 'zod'

import { loadEncoder, type Encoder } from './encoder.js'
import { splitSentences } from './sentences.js'
import { tokenize } from './tokenize.js'
import { headerLine, recordToLine, type WireRecord, type WireToken } from './wire.js'

export type InputKind = 'happy_csv' | 'posts_jsonl'

export interface AnnotationJob {
  inputPath: string
  kind: InputKind
  outputPath: string
  encoderId: string
  batchSize: number
  /** split multi-sentence texts (disable for pre-split input) */
  split: boolean
  /** CSV column overrides; sensible defaults cover HappyDB-style files */
  textColumn?: string
  idColumn?: string
  userColumn?: string
}

export interface AnnotationReport {
  written: number
  skipped: number
  encoderId: string
  dim: number
  warnings: string[]
}

interface RawRow {
  id: string
  userId: string
  subgroup: 'depression' | 'control' | null
  text: string
}

const TEXT_COLUMNS = ['cleaned_hm', 'hm', 'text', 'moment', 'sentence']
const ID_COLUMNS = ['hmid', 'id']
const USER_COLUMNS = ['wid', 'worker_id', 'user_id', 'user']

const postRowSchema = z
  .object({
    id: z.union([z.string(), z.number()]).optional(),
    user_id: z.union([z.string(), z.number()]).optional(),
    subgroup: z.enum(['depression', 'control']).nullish(),
    text: z.string().optional(),
    body: z.string().optional(),
  })
  .passthrough()

function pickColumn(fields: string[], wanted: string | undefined,
                    fallbacks: string[], what: string): string | null {
  if (wanted) {
    if (!fields.includes(wanted)) {
      throw new Error(`input has no ${JSON.stringify(wanted)} column for ${what}`)
    }
    return wanted
  }
  for (const name of fallbacks) {
    if (fields.includes(name)) return name
  }
  return null
}

function readHappyCsv(job: AnnotationJob, warnings: string[]): RawRow[] {
  const content = fs.readFileSync(job.inputPath, 'utf-8')
  const parsed = Papa.parse<Record<string, string>>(content, {
    header: true,
    skipEmptyLines: true,
  })
  for (const err of parsed.errors.slice(0, 5)) {
    warnings.push(`csv row ${err.row}: ${err.message}`)
  }
  const fields = parsed.meta.fields ?? []
  const textCol = pickColumn(fields, job.textColumn, TEXT_COLUMNS, 'text')
  if (!textCol) {
    throw new Error(
      `cannot find a text column among ${JSON.stringify(fields)}; pass --text-column`)
  }
  const idCol = pickColumn(fields, job.idColumn, ID_COLUMNS, 'id')
  const userCol = pickColumn(fields, job.userColumn, USER_COLUMNS, 'user id')

  const rows: RawRow[] = []
  parsed.data.forEach((row, index) => {
    const text = (row[textCol] ?? '').trim()
    if (!text) {
      warnings.push(`csv row ${index + 1}: empty ${textCol}, skipped`)
      return
    }
    rows.push({
      id: idCol && row[idCol] ? String(row[idCol]) : `row${index + 1}`,
      userId: userCol && row[userCol] ? String(row[userCol]) : 'unknown',
      subgroup: null,
      text,
    })
  })
  return rows
}

function readPostsJsonl(job: AnnotationJob, warnings: string[]): RawRow[] {
  const content = fs.readFileSync(job.inputPath, 'utf-8')
  const rows: RawRow[] = []
  content.split(/\r?\n/).forEach((line, index) => {
    const stripped = line.trim()
    if (!stripped || stripped.startsWith('#')) return
    let obj: unknown
    try {
      obj = JSON.parse(stripped)
    } catch {
      warnings.push(`line ${index + 1}: invalid JSON, skipped`)
      return
    }
    const parsed = postRowSchema.safeParse(obj)
    if (!parsed.success) {
      warnings.push(`line ${index + 1}: ${parsed.error.issues[0].message}, skipped`)
      return
    }
    const text = (parsed.data.text ?? parsed.data.body ?? '').trim()
    if (!text) {
      warnings.push(`line ${index + 1}: no text, skipped`)
      return
    }
    rows.push({
      id: parsed.data.id !== undefined ? String(parsed.data.id) : `post${index + 1}`,
      userId: parsed.data.user_id !== undefined ? String(parsed.data.user_id) : 'unknown',
      subgroup: parsed.data.subgroup ?? null,
      text,
    })
  })
  return rows
}

interface PendingRecord {
  record: Omit<WireRecord, 'embedding'>
  tokens: WireToken[]
}

function buildRecords(rows: RawRow[], job: AnnotationJob,
                      warnings: string[]): PendingRecord[] {
  const puSource = job.kind === 'happy_csv' ? 'labeled_positive' : 'unlabeled'
  const seen = new Set<string>()
  const pending: PendingRecord[] = []
  for (const row of rows) {
    const sentences = job.split ? splitSentences(row.text) : [row.text]
    sentences.forEach((sentence, k) => {
      const tokens = tokenize(sentence)
      if (tokens.length === 0) {
        warnings.push(`${row.id}: sentence without tokens, skipped`)
        return
      }
      const id = sentences.length > 1 ? `${row.id}_s${k + 1}` : row.id
      if (seen.has(id)) {
        warnings.push(`${row.id}: duplicate id ${id}, skipped`)
        return
      }
      seen.add(id)
      pending.push({
        record: {
          id,
          user_id: row.userId,
          pu_source: puSource,
          subgroup: puSource === 'labeled_positive' ? null : row.subgroup,
          text: sentence,
          tokens,
        },
        tokens,
      })
    })
  }
  return pending
}

function encodeInBatches(pending: PendingRecord[], encoder: Encoder,
                         batchSize: number): number[][] {
  const vectors: number[][] = []
  for (let start = 0; start < pending.length; start += batchSize) {
    const batch = pending.slice(start, start + batchSize).map((p) => p.tokens)
    vectors.push(...encoder.encode(batch))
  }
  return vectors
}

export function annotateCorpus(job: AnnotationJob): AnnotationReport {
  const warnings: string[] = []
  const encoder = loadEncoder(job.encoderId)
  const rows = job.kind === 'happy_csv'
    ? readHappyCsv(job, warnings)
    : readPostsJsonl(job, warnings)
  if (rows.length === 0) {
    warnings.push('input contained no usable rows; writing an empty corpus')
  }
  const pending = buildRecords(rows, job, warnings)
  const vectors = encodeInBatches(pending, encoder, Math.max(1, job.batchSize))

  const lines = [headerLine(encoder.id, encoder.dim)]
  pending.forEach((p, i) => {
    lines.push(recordToLine({ ...p.record, embedding: vectors[i] }))
  })
  fs.writeFileSync(job.outputPath, lines.join('\n') + '\n', 'utf-8')

  return {
    written: pending.length,
    skipped: warnings.length,
    encoderId: encoder.id,
    dim: encoder.dim,
    warnings,
  }
}
