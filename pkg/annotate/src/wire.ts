/**
 * The corpus wire format consumed by the momentminer toolkit: UTF-8 JSON
 * lines, one sentence record per line, preceded by one comment header
 * recording the encoder id and embedding dimension.
 */

export type PosTag = 'NOUN' | 'VERB' | 'ADJ' | 'ADV' | 'PRON' | 'OTHER'

export interface WireToken {
  surface: string
  lemma: string
  pos: PosTag
}

export interface WireRecord {
  id: string
  user_id: string
  pu_source: 'labeled_positive' | 'unlabeled'
  subgroup: 'depression' | 'control' | null
  text: string
  tokens: WireToken[]
  embedding: number[] | null
}

export function headerLine(encoderId: string, dim: number): string {
  return `# encoder=${encoderId} dim=${dim}`
}

export function recordToLine(record: WireRecord): string {
  // key order matches the field list of the format; stable output
  return JSON.stringify({
    id: record.id,
    user_id: record.user_id,
    pu_source: record.pu_source,
    subgroup: record.subgroup,
    text: record.text,
    tokens: record.tokens,
    embedding: record.embedding,
  })
}
