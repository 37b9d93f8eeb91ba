import { spawnSync } from 'node:child_process'

import { describe, expect, it } from 'vitest'

import { fnv1a64, hashedSentenceVector, loadEncoder } from '../src/encoder.js'

describe('fnv1a64', () => {
  it('matches the published test vectors', () => {
    expect(fnv1a64(new Uint8Array(0))).toBe(0xcbf29ce484222325n)
    expect(fnv1a64(new TextEncoder().encode('a'))).toBe(0xaf63dc4c8601ec8cn)
    expect(fnv1a64(new TextEncoder().encode('foobar'))).toBe(0x85944171f73967e8n)
  })
})

describe('hashed encoder', () => {
  it('is deterministic with the declared dimension', () => {
    const encoder = loadEncoder('hash://128')
    expect(encoder.dim).toBe(128)
    const tokens = [
      { surface: 'happy', lemma: 'happy', pos: 'ADJ' as const },
      { surface: 'day', lemma: 'day', pos: 'NOUN' as const },
    ]
    const [a] = encoder.encode([tokens])
    const [b] = encoder.encode([tokens])
    expect(a).toEqual(b)
    expect(a.length).toBe(128)
  })

  it('L2-normalizes nonzero vectors', () => {
    const row = hashedSentenceVector(['one', 'two', 'three'], 64)
    const norm = Math.sqrt(row.reduce((acc, v) => acc + v * v, 0))
    expect(Math.abs(norm - 1)).toBeLessThan(1e-12)
  })

  it('returns a zero vector for an empty sentence', () => {
    expect(hashedSentenceVector([], 16)).toEqual(new Array(16).fill(0))
  })

  it('rejects unknown encoder ids instead of guessing', () => {
    expect(() => loadEncoder('st://all-MiniLM-L6-v2')).toThrow(/cannot load encoder/)
    expect(() => loadEncoder('hash://0')).toThrow(/positive integer/)
  })

  it('is bit-compatible with the consuming toolkit hashed featurizer', () => {
    const lemmas = ['my', 'friend', 'love', 'music', 'tonight']
    const dim = 256
    const script = [
      'import json, sys',
      'from momentminer.features import FeaturizerConfig, hashed_ngram_row, l2_normalize',
      'lemmas = json.loads(sys.argv[1]); dim = int(sys.argv[2])',
      'cfg = FeaturizerConfig.hashed(dim=dim, l2_normalize=False)',
      'print(json.dumps(l2_normalize(hashed_ngram_row(lemmas, cfg)).tolist()))',
    ].join('\n')
    const proc = spawnSync('python3', ['-c', script, JSON.stringify(lemmas), String(dim)],
                           { encoding: 'utf-8' })
    expect(proc.status, proc.stderr).toBe(0)
    const reference: number[] = JSON.parse(proc.stdout)
    const ours = hashedSentenceVector(lemmas, dim)
    expect(ours.length).toBe(reference.length)
    for (let i = 0; i < dim; i++) {
      expect(Math.abs(ours[i] - reference[i])).toBeLessThan(1e-12)
    }
  })
})
