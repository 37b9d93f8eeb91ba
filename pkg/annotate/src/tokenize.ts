/**
 * Compact rule/lexicon English tokenizer, POS tagger, and lemmatizer.
 *
 * The tag set is the six-way scheme of the wire format (NOUN, VERB, ADJ,
 * ADV, PRON, OTHER); fine distinctions are deliberately collapsed.  Closed
 * classes come from word lists, open classes from suffix heuristics with
 * NOUN as the content-word fallback.
 */

import type { PosTag, WireToken } from './wire.js'

const WORD = /[A-Za-z0-9]+(?:['’][A-Za-z]+)?/g

const PRONOUNS = new Set([
  'i', 'me', 'my', 'mine', 'myself', 'we', 'us', 'our', 'ours', 'ourselves',
  'you', 'your', 'yours', 'yourself', 'he', 'him', 'his', 'himself', 'she',
  'her', 'hers', 'herself', 'it', 'its', 'itself', 'they', 'them', 'their',
  'theirs', 'themselves', 'who', 'whom', 'someone', 'anyone', 'everyone',
  'something', 'anything', 'everything', 'nothing',
])

// determiners, prepositions, conjunctions, auxiliaries, particles
const FUNCTION_WORDS = new Set([
  'the', 'a', 'an', 'this', 'that', 'these', 'those', 'some', 'any', 'no',
  'each', 'every', 'all', 'both', 'few', 'many', 'much', 'more', 'most',
  'of', 'in', 'on', 'at', 'by', 'for', 'with', 'about', 'against', 'between',
  'into', 'through', 'during', 'before', 'after', 'above', 'below', 'to',
  'from', 'up', 'down', 'out', 'off', 'over', 'under', 'and', 'or', 'but',
  'if', 'because', 'as', 'until', 'while', 'than', 'though', 'although',
  'am', 'is', 'are', 'was', 'were', 'be', 'been', 'being', 'do', 'does',
  'did', 'have', 'has', 'had', 'having', 'will', 'would', 'shall', 'should',
  'can', 'could', 'may', 'might', 'must', 'not', "n't", 'there', 'when',
  'where', 'why', 'how', 'what', 'which', 'whose', 'yes',
])

const ADVERBS = new Set([
  'very', 'really', 'quite', 'too', 'so', 'just', 'again', 'already', 'also',
  'always', 'never', 'often', 'sometimes', 'soon', 'still', 'then', 'now',
  'here', 'together', 'finally', 'recently', 'yesterday', 'today', 'tomorrow',
  'almost', 'even', 'ever', 'maybe', 'perhaps', 'away', 'back', 'well',
])

const ADJECTIVES = new Set([
  'happy', 'glad', 'sad', 'good', 'great', 'bad', 'new', 'old', 'big',
  'small', 'long', 'little', 'nice', 'best', 'better', 'worst', 'amazing',
  'wonderful', 'beautiful', 'proud', 'excited', 'favorite', 'first', 'last',
  'young', 'early', 'late', 'hard', 'easy', 'free', 'full', 'own', 'same',
  'different', 'juicy', 'dead', 'alive', 'warm', 'cold', 'sweet',
])

// base forms of frequent verbs; inflections are recognized by suffix rules
const VERB_STEMS = new Set([
  'go', 'get', 'make', 'know', 'think', 'take', 'see', 'come', 'want',
  'look', 'use', 'find', 'give', 'tell', 'work', 'call', 'try', 'ask',
  'need', 'feel', 'become', 'leave', 'put', 'mean', 'keep', 'let', 'begin',
  'seem', 'help', 'talk', 'turn', 'start', 'show', 'hear', 'play', 'run',
  'move', 'like', 'live', 'believe', 'hold', 'bring', 'happen', 'write',
  'sit', 'stand', 'lose', 'pay', 'meet', 'learn', 'change', 'watch',
  'love', 'enjoy', 'laugh', 'smile', 'cry', 'hug', 'cuddle', 'listen',
  'sing', 'dance', 'eat', 'drink', 'sleep', 'dream', 'wake', 'buy', 'visit',
  'travel', 'walk', 'cook', 'read', 'finish', 'win', 'adopt', 'build',
  'lead', 'save', 'score', 'spend', 'wait', 'clean', 'fix', 'publish',
])

// surface -> [lemma, tag]
const IRREGULAR: Record<string, [string, PosTag]> = {
  went: ['go', 'VERB'], gone: ['go', 'VERB'], got: ['get', 'VERB'],
  gotten: ['get', 'VERB'], made: ['make', 'VERB'], knew: ['know', 'VERB'],
  known: ['know', 'VERB'], thought: ['think', 'VERB'], took: ['take', 'VERB'],
  taken: ['take', 'VERB'], saw: ['see', 'VERB'], seen: ['see', 'VERB'],
  came: ['come', 'VERB'], found: ['find', 'VERB'], gave: ['give', 'VERB'],
  given: ['give', 'VERB'], told: ['tell', 'VERB'], felt: ['feel', 'VERB'],
  became: ['become', 'VERB'], left: ['leave', 'VERB'], meant: ['mean', 'VERB'],
  kept: ['keep', 'VERB'], began: ['begin', 'VERB'], begun: ['begin', 'VERB'],
  heard: ['hear', 'VERB'], ran: ['run', 'VERB'], held: ['hold', 'VERB'],
  brought: ['bring', 'VERB'], wrote: ['write', 'VERB'], written: ['write', 'VERB'],
  sat: ['sit', 'VERB'], stood: ['stand', 'VERB'], lost: ['lose', 'VERB'],
  paid: ['pay', 'VERB'], met: ['meet', 'VERB'], learnt: ['learn', 'VERB'],
  ate: ['eat', 'VERB'], eaten: ['eat', 'VERB'], drank: ['drink', 'VERB'],
  slept: ['sleep', 'VERB'], woke: ['wake', 'VERB'], woken: ['wake', 'VERB'],
  bought: ['buy', 'VERB'], sang: ['sing', 'VERB'], sung: ['sing', 'VERB'],
  won: ['win', 'VERB'], built: ['build', 'VERB'], led: ['lead', 'VERB'],
  spent: ['spend', 'VERB'], said: ['say', 'VERB'], did: ['do', 'VERB'],
  children: ['child', 'NOUN'], men: ['man', 'NOUN'], women: ['woman', 'NOUN'],
  people: ['person', 'NOUN'], feet: ['foot', 'NOUN'], teeth: ['tooth', 'NOUN'],
  mice: ['mouse', 'NOUN'], wives: ['wife', 'NOUN'], lives: ['life', 'NOUN'],
}

function undouble(stem: string): string {
  // stopped -> stop, running -> run; keep legitimate doubles like 'fall'
  if (stem.length >= 3 && stem[stem.length - 1] === stem[stem.length - 2] &&
      !'aeiou'.includes(stem[stem.length - 1])) {
    const single = stem.slice(0, -1)
    if (VERB_STEMS.has(single)) return single
  }
  return stem
}

function verbLemma(word: string): string | null {
  if (VERB_STEMS.has(word)) return word
  if (word.endsWith('ies') && VERB_STEMS.has(word.slice(0, -3) + 'y')) {
    return word.slice(0, -3) + 'y'
  }
  if (word.endsWith('ing')) {
    const stem = undouble(word.slice(0, -3))
    if (VERB_STEMS.has(stem)) return stem
    if (VERB_STEMS.has(stem + 'e')) return stem + 'e'
  }
  if (word.endsWith('ed')) {
    const stem = undouble(word.slice(0, -2))
    if (VERB_STEMS.has(stem)) return stem
    if (VERB_STEMS.has(stem + 'e')) return stem + 'e'
    if (word.endsWith('ied') && VERB_STEMS.has(word.slice(0, -3) + 'y')) {
      return word.slice(0, -3) + 'y'
    }
  }
  if (word.endsWith('es') && VERB_STEMS.has(word.slice(0, -2))) {
    return word.slice(0, -2)
  }
  if (word.endsWith('s') && VERB_STEMS.has(word.slice(0, -1))) {
    return word.slice(0, -1)
  }
  return null
}

function nounLemma(word: string): string {
  if (word.endsWith('ies') && word.length > 4) return word.slice(0, -3) + 'y'
  if (word.endsWith('sses') || word.endsWith('shes') || word.endsWith('ches') ||
      word.endsWith('xes') || word.endsWith('zes')) {
    return word.slice(0, -2)
  }
  if (word.endsWith('ss') || word.endsWith('us') || word.endsWith('is')) return word
  if (word.endsWith('s') && word.length > 3) return word.slice(0, -1)
  return word
}

export function tagWord(surface: string): WireToken {
  const word = surface.toLowerCase()
  if (PRONOUNS.has(word)) return { surface, lemma: word, pos: 'PRON' }
  if (FUNCTION_WORDS.has(word)) return { surface, lemma: word, pos: 'OTHER' }
  const irregular = IRREGULAR[word]
  if (irregular) return { surface, lemma: irregular[0], pos: irregular[1] }
  if (/^[0-9]/.test(word)) return { surface, lemma: word, pos: 'OTHER' }
  if (ADVERBS.has(word)) return { surface, lemma: word, pos: 'ADV' }
  if (ADJECTIVES.has(word)) return { surface, lemma: word, pos: 'ADJ' }
  const verb = verbLemma(word)
  if (verb) return { surface, lemma: verb, pos: 'VERB' }
  if (word.endsWith('ly') && word.length > 4) {
    return { surface, lemma: word, pos: 'ADV' }
  }
  if (/(ful|ous|ive|able|ible|less)$/.test(word) && word.length > 5) {
    return { surface, lemma: word, pos: 'ADJ' }
  }
  return { surface, lemma: nounLemma(word), pos: 'NOUN' }
}

export function tokenize(text: string): WireToken[] {
  const tokens: WireToken[] = []
  for (const match of text.matchAll(WORD)) {
    tokens.push(tagWord(match[0]))
  }
  return tokens
}
