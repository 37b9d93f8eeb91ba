/**
 * Rule-based sentence splitting: a run of .!? ends a sentence when followed
 * by whitespace and a capital letter (or end of text), except after a fixed
 * list of protected abbreviations.  Mirrors the splitter on the consuming
 * side so pre-split and annotator-split corpora agree.
 */

const PROTECTED = new Set(['mr.', 'mrs.', 'dr.', 'st.', 'e.g.', 'i.e.', 'etc.', 'vs.'])

const TERMINATOR_RUN = /[.!?]+/g

function isSpace(ch: string): boolean {
  return /\s/.test(ch)
}

function isUpper(ch: string): boolean {
  return ch !== ch.toLowerCase() && ch === ch.toUpperCase()
}

export function splitSentences(text: string): string[] {
  const sentences: string[] = []
  let start = 0
  for (const match of text.matchAll(TERMINATOR_RUN)) {
    const end = match.index! + match[0].length
    if (end < text.length) {
      if (!isSpace(text[end])) continue
      let follow = end
      while (follow < text.length && isSpace(text[follow])) follow++
      if (follow < text.length && !isUpper(text[follow])) continue
      if (match[0].endsWith('.')) {
        const tail = text.slice(start, end).match(/(\S+)$/)
        if (tail && PROTECTED.has(tail[1].toLowerCase())) continue
      }
    }
    const chunk = text.slice(start, end).trim()
    if (chunk) sentences.push(chunk)
    start = end
  }
  const rest = text.slice(start).trim()
  if (rest) sentences.push(rest)
  return sentences
}
