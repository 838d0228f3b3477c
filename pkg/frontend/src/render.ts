// Rendering one feedback response into the result panel.
//
// All program text and example text comes verbatim from the server; the
// client never re-formats it. Hint levels gate what is visible: the
// counterexample or conflict is always first, hole specs unlock at
// level 1, the repair suggestion at level 2.

import type { FeedbackResponse } from './types'
import { isFeedbackResponse } from './types'
import type { HintLevel } from './state'

const BANNER_CLASS: Record<string, string> = {
  Correct: 'banner-correct',
  OnTrack: 'banner-on-track',
  OffTrack: 'banner-off-track',
  TooComplex: 'banner-too-complex',
  Inconclusive: 'banner-inconclusive',
}

const BANNER_TEXT: Record<string, string> = {
  Correct: 'Correct — the exercise is finished.',
  OnTrack: 'On track — the missing pieces can still be filled in.',
  OffTrack: 'Off track — this cannot be completed as written.',
  TooComplex: 'No verdict — your approach looks more complex than needed.',
  Inconclusive: 'No verdict — checking did not finish in time.',
}

export function renderFeedback(
  container: HTMLElement,
  payload: unknown,
  hintLevel: HintLevel,
  buffer: string,
  stale: boolean = false,
): void {
  container.textContent = ''
  if (!isFeedbackResponse(payload)) {
    renderSchemaError(container, payload)
    return
  }
  const fb: FeedbackResponse = payload

  if (stale) {
    const note = el('div', 'stale-note')
    note.textContent = 'The editor changed since this feedback was produced.'
    container.appendChild(note)
  }

  const banner = el('div', `banner ${BANNER_CLASS[fb.classification] ?? ''}`)
  banner.dataset.classification = fb.classification
  banner.textContent = BANNER_TEXT[fb.classification] ?? fb.classification
  container.appendChild(banner)

  if (fb.error) {
    const panel = el('div', 'panel panel-error')
    const where = fb.error.line != null ? ` at ${fb.error.line}:${fb.error.col}` : ''
    panel.appendChild(heading(`${fb.error.kind}${where}`))
    panel.appendChild(pre(fb.error.message))
    container.appendChild(panel)
  }

  if (fb.counterexample) {
    const panel = el('div', 'panel panel-counterexample')
    panel.appendChild(heading('Counterexample'))
    panel.appendChild(pre(fb.counterexample.text))
    if (fb.counterexample.contains_hole) {
      const note = el('div', 'note')
      note.textContent =
        'No way to fill the holes makes this input come out right.'
      panel.appendChild(note)
    }
    container.appendChild(panel)
  }

  if (fb.violated_properties.length > 0) {
    const panel = el('div', 'panel panel-properties')
    panel.appendChild(heading('Violated properties'))
    const list = el('ul', 'violated-properties')
    for (const name of fb.violated_properties) {
      const item = document.createElement('li')
      item.textContent = name
      list.appendChild(item)
    }
    panel.appendChild(list)
    container.appendChild(panel)
  }

  if (fb.conflict) {
    const panel = el('div', 'panel panel-conflict')
    panel.appendChild(heading(`Conflicting requirements on hole ?${fb.conflict.hole}`))
    const pair = el('div', 'conflict-pair')
    for (const example of fb.conflict.pair) {
      pair.appendChild(pre(example.text))
    }
    panel.appendChild(pair)
    const note = el('div', 'note')
    note.textContent = 'A function cannot return different outputs for the same input.'
    panel.appendChild(note)
    container.appendChild(panel)
  }

  if (hintLevel >= 1 && fb.hole_specs.length > 0) {
    for (const spec of fb.hole_specs) {
      const panel = el('div', 'panel panel-hole-spec')
      panel.dataset.hole = String(spec.hole)
      panel.appendChild(heading(`Hole ?${spec.hole} should satisfy`))
      const list = el('ul', 'hole-spec-examples')
      for (const example of spec.examples) {
        const item = document.createElement('li')
        item.appendChild(pre(example.text))
        list.appendChild(item)
      }
      if (spec.examples.length === 0) {
        const item = document.createElement('li')
        item.textContent = '(no concrete examples for this hole)'
        list.appendChild(item)
      }
      panel.appendChild(list)
      container.appendChild(panel)
    }
  }

  if (hintLevel >= 2 && fb.repair) {
    const panel = el('div', 'panel panel-repair')
    panel.appendChild(heading(`Suggested repair (replacing ${fb.repair.replaced.join(', ')})`))
    panel.appendChild(renderDiff(buffer, fb.repair.program))
    container.appendChild(panel)
  }

  if (fb.advice) {
    const panel = el('div', 'panel panel-advice')
    panel.appendChild(heading('Advice'))
    panel.appendChild(pre(`Consider an approach built on '${fb.advice}'.`))
    container.appendChild(panel)
  }

  const next = nextHintLabel(fb, hintLevel)
  if (next) {
    const more = el('div', 'more-hints')
    more.dataset.nextHint = next
    container.appendChild(more)
  }
}

export function nextHintLabel(fb: FeedbackResponse, level: HintLevel): string | null {
  if (level < 1 && fb.hole_specs.length > 0) return 'show hole examples'
  if (level < 2 && fb.repair) return 'show a repair suggestion'
  return null
}

function renderSchemaError(container: HTMLElement, payload: unknown): void {
  const banner = el('div', 'banner banner-schema-error')
  banner.textContent = 'The server response did not match the expected format.'
  container.appendChild(banner)
  container.appendChild(pre(JSON.stringify(payload, null, 2), 'raw-payload'))
}

function renderDiff(before: string, after: string): HTMLElement {
  const wrap = el('div', 'diff')
  for (const line of diffLines(before.trimEnd(), after.trimEnd())) {
    const row = el('div', `diff-line diff-${line.kind}`)
    const marker = line.kind === 'add' ? '+ ' : line.kind === 'del' ? '- ' : '  '
    row.textContent = marker + line.text
    wrap.appendChild(row)
  }
  return wrap
}

export interface DiffLine {
  kind: 'same' | 'add' | 'del'
  text: string
}

/** Line diff via longest common subsequence; inputs are tiny programs. */
export function diffLines(before: string, after: string): DiffLine[] {
  const a = before.length > 0 ? before.split('\n') : []
  const b = after.length > 0 ? after.split('\n') : []
  const m = a.length
  const n = b.length
  const lcs: number[][] = Array.from({ length: m + 1 }, () => new Array(n + 1).fill(0))
  for (let i = m - 1; i >= 0; i--) {
    for (let j = n - 1; j >= 0; j--) {
      lcs[i][j] = a[i] === b[j]
        ? lcs[i + 1][j + 1] + 1
        : Math.max(lcs[i + 1][j], lcs[i][j + 1])
    }
  }
  const out: DiffLine[] = []
  let i = 0
  let j = 0
  while (i < m && j < n) {
    if (a[i] === b[j]) {
      out.push({ kind: 'same', text: a[i] })
      i++
      j++
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      out.push({ kind: 'del', text: a[i] })
      i++
    } else {
      out.push({ kind: 'add', text: b[j] })
      j++
    }
  }
  for (; i < m; i++) out.push({ kind: 'del', text: a[i] })
  for (; j < n; j++) out.push({ kind: 'add', text: b[j] })
  return out
}

function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag)
  node.className = className
  return node
}

function heading(text: string): HTMLElement {
  const h = document.createElement('h3')
  h.textContent = text
  return h
}

function pre(text: string, className = 'code'): HTMLElement {
  const node = document.createElement('pre')
  node.className = className
  node.textContent = text
  return node
}
