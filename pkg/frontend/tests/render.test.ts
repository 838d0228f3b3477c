// Rendering the recorded responses of the three headline scenarios.

import { readFileSync } from 'node:fs'
import { dirname, join } from 'node:path'
import { fileURLToPath } from 'node:url'
import { beforeEach, describe, expect, it } from 'vitest'

import { diffLines, nextHintLabel, renderFeedback } from '../src/render'
import type { FeedbackResponse } from '../src/types'

function fixture(name: string): FeedbackResponse {
  const path = join(dirname(fileURLToPath(import.meta.url)), 'fixtures', `${name}.json`)
  return JSON.parse(readFileSync(path, 'utf-8'))
}

let container: HTMLElement

beforeEach(() => {
  document.body.innerHTML = '<div id="c"></div>'
  container = document.querySelector('#c') as HTMLElement
})

describe('scenario 1: finished but wrong', () => {
  const payload = fixture('scenario1_finished_wrong')

  it('shows the off-track banner', () => {
    renderFeedback(container, payload, 0, 'my_sort = foldr (:) []')
    const banner = container.querySelector('.banner') as HTMLElement
    expect(banner.dataset.classification).toBe('OffTrack')
  })

  it('shows the counterexample text verbatim', () => {
    renderFeedback(container, payload, 0, '')
    const cex = container.querySelector('.panel-counterexample pre') as HTMLElement
    expect(cex.textContent).toBe(payload.counterexample!.text)
    expect(cex.textContent).toMatch(/^my_sort \[.*\] == /)
  })

  it('lists the violated property by name', () => {
    renderFeedback(container, payload, 0, '')
    const items = [...container.querySelectorAll('.violated-properties li')]
    expect(items.map((el) => el.textContent)).toEqual(['sort_nondescending'])
  })

  it('reveals the repair only at hint level 2, as a diff', () => {
    const buffer = 'my_sort = foldr (:) []'
    renderFeedback(container, payload, 0, buffer)
    expect(container.querySelector('.panel-repair')).toBeNull()
    renderFeedback(container, payload, 1, buffer)
    expect(container.querySelector('.panel-repair')).toBeNull()
    renderFeedback(container, payload, 2, buffer)
    const repair = container.querySelector('.panel-repair') as HTMLElement
    expect(repair).not.toBeNull()
    expect(repair.querySelectorAll('.diff-add').length).toBeGreaterThan(0)
    // the counterexample stays visible alongside the repair
    expect(container.querySelector('.panel-counterexample')).not.toBeNull()
  })
})

describe('scenario 4: map conflict', () => {
  const payload = fixture('scenario4_map_conflict')

  it('shows the conflict pair', () => {
    renderFeedback(container, payload, 0, 'my_sort = map ?')
    const pair = [...container.querySelectorAll('.conflict-pair pre')]
    expect(pair).toHaveLength(2)
    const texts = pair.map((el) => el.textContent)
    expect(texts[0]).not.toBe(texts[1])
    for (const text of texts) expect(text).toMatch(/^f .* == /)
  })

  it('conflict groups include the f 2 pair from [2,2,1]', () => {
    const all = payload.conflict!.groups.flatMap((g) => g.examples.map((e) => e.text))
    expect(all).toContain('f 2 == 2')
    expect(all).toContain('f 2 == 1')
  })

  it('shows the off-track banner', () => {
    renderFeedback(container, payload, 0, '')
    const banner = container.querySelector('.banner') as HTMLElement
    expect(banner.dataset.classification).toBe('OffTrack')
  })
})

describe('scenario 6: foldr on track', () => {
  const payload = fixture('scenario6_foldr_on_track')

  it('shows the on-track banner and no evidence panels at level 0', () => {
    renderFeedback(container, payload, 0, '')
    const banner = container.querySelector('.banner') as HTMLElement
    expect(banner.dataset.classification).toBe('OnTrack')
    expect(container.querySelector('.panel-hole-spec')).toBeNull()
    expect(nextHintLabel(payload, 0)).toBe('show hole examples')
  })

  it('shows two hole-spec panels at level 1', () => {
    renderFeedback(container, payload, 1, '')
    const panels = [...container.querySelectorAll('.panel-hole-spec')]
    expect(panels).toHaveLength(2)
    const holes = panels.map((p) => (p as HTMLElement).dataset.hole)
    expect(holes).toEqual(['0', '1'])
    for (const panel of panels) {
      expect(panel.querySelectorAll('li').length).toBeGreaterThan(0)
    }
  })

  it('renders hole spec texts verbatim', () => {
    renderFeedback(container, payload, 1, '')
    const shown = [...container.querySelectorAll('.hole-spec-examples pre')]
      .map((el) => el.textContent)
    const sent = payload.hole_specs.flatMap((s) => s.examples.map((e) => e.text))
    expect(shown).toEqual(sent)
  })
})

describe('correct payload', () => {
  it('shows the success banner and nothing else', () => {
    renderFeedback(container, fixture('correct'), 0, '')
    const banner = container.querySelector('.banner') as HTMLElement
    expect(banner.dataset.classification).toBe('Correct')
    expect(container.querySelectorAll('.panel')).toHaveLength(0)
  })
})

describe('schema mismatch', () => {
  it('renders an error banner with the raw payload', () => {
    renderFeedback(container, { bogus: true }, 0, '')
    expect(container.querySelector('.banner-schema-error')).not.toBeNull()
    const raw = container.querySelector('.raw-payload') as HTMLElement
    expect(raw.textContent).toContain('bogus')
  })
})

describe('diffLines', () => {
  it('marks changed lines', () => {
    const diff = diffLines('a\nb\nc', 'a\nx\nc')
    expect(diff).toEqual([
      { kind: 'same', text: 'a' },
      { kind: 'del', text: 'b' },
      { kind: 'add', text: 'x' },
      { kind: 'same', text: 'c' },
    ])
  })

  it('handles empty sides', () => {
    expect(diffLines('', 'a')).toEqual([{ kind: 'add', text: 'a' }])
    expect(diffLines('a', '')).toEqual([{ kind: 'del', text: 'a' }])
  })
})
