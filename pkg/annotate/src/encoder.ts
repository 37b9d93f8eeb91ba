/**
 * Sentence encoders.  The encoder id is a free string recorded in the
 * output header; the built-in `hash://<dim>` encoder embeds the lemma
 * 1- and 2-grams of a sentence with a signed 64-bit FNV-1a hash and L2
 * normalization.  It is fully deterministic and bit-compatible with the
 * hashed featurizer on the consuming side, so no model download is needed.
 *
 * Ids with any other scheme are treated as external models; loading them
 * is delegated to `loadEncoder`, which fails fast when the model is not
 * available rather than guessing.
 */

import type { WireToken } from './wire.js'

const FNV_OFFSET = 0xcbf29ce484222325n
const FNV_PRIME = 0x100000001b3n
const MASK64 = (1n << 64n) - 1n
const SIGN_SALT = 0x9e3779b97f4a7c15n
const NGRAM_JOIN = 0x1f

export function fnv1a64(data: Uint8Array, seed = 0n): bigint {
  let h = (FNV_OFFSET ^ (seed & MASK64)) & MASK64
  for (const byte of data) {
    h ^= BigInt(byte)
    h = (h * FNV_PRIME) & MASK64
  }
  return h
}

export interface Encoder {
  readonly id: string
  readonly dim: number
  encode(sentences: WireToken[][]): number[][]
}

function ngramBytes(lemmas: string[], start: number, n: number): Uint8Array {
  const encoder = new TextEncoder()
  const parts = []
  for (let k = 0; k < n; k++) parts.push(encoder.encode(lemmas[start + k]))
  const total = parts.reduce((acc, p) => acc + p.length, 0) + (n - 1)
  const out = new Uint8Array(total)
  let offset = 0
  for (let k = 0; k < parts.length; k++) {
    if (k > 0) out[offset++] = NGRAM_JOIN
    out.set(parts[k], offset)
    offset += parts[k].length
  }
  return out
}

export function hashedSentenceVector(lemmas: string[], dim: number,
                                     seed = 0n): number[] {
  const row = new Array<number>(dim).fill(0)
  const lowered = lemmas.map((l) => l.toLowerCase())
  for (let n = 1; n <= 2; n++) {
    for (let start = 0; start + n <= lowered.length; start++) {
      const key = ngramBytes(lowered, start, n)
      const bucket = Number(fnv1a64(key, seed) % BigInt(dim))
      const sign = (fnv1a64(key, seed ^ SIGN_SALT) & 1n) === 0n ? 1 : -1
      row[bucket] += sign
    }
  }
  let sumSquares = 0
  for (const v of row) sumSquares += v * v
  if (sumSquares > 0) {
    const norm = Math.sqrt(sumSquares)
    for (let i = 0; i < dim; i++) row[i] /= norm
  }
  return row
}

class HashedEncoder implements Encoder {
  readonly id: string
  readonly dim: number

  constructor(dim: number) {
    if (!Number.isInteger(dim) || dim <= 0) {
      throw new Error(`hash encoder needs a positive integer dimension, got ${dim}`)
    }
    this.id = `hash://${dim}`
    this.dim = dim
  }

  encode(sentences: WireToken[][]): number[][] {
    return sentences.map((tokens) =>
      hashedSentenceVector(tokens.map((t) => t.lemma), this.dim))
  }
}

export function loadEncoder(id: string): Encoder {
  const hashed = id.match(/^hash:\/\/(\d+)$/)
  if (hashed) return new HashedEncoder(Number(hashed[1]))
  throw new Error(
    `cannot load encoder ${JSON.stringify(id)}: no such model is available ` +
    `locally (the built-in deterministic encoder is "hash://<dim>")`)
}
