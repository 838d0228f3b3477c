// View-state invariants: one request in flight, stale labeling,
// hint-level monotonicity, hole insertion.

import { describe, expect, it } from 'vitest'

import { Store } from '../src/state'
import type { FeedbackResponse } from '../src/types'

const FEEDBACK: FeedbackResponse = {
  classification: 'Correct',
  exercise_id: 'my_sort',
  counterexample: null,
  violated_properties: [],
  properties_skipped: false,
  conflict: null,
  hole_specs: [],
  repair: null,
  advice: null,
  error: null,
  diagnostics: {},
}

function storeWithBuffer(src: string): Store {
  const store = new Store()
  store.selectExercise('my_sort')
  store.edit(src)
  return store
}

describe('requests', () => {
  it('allows at most one in flight', () => {
    const store = storeWithBuffer('my_sort = ?')
    const first = store.beginRequest()
    expect(first).not.toBeNull()
    expect(store.beginRequest()).toBeNull()
    store.resolveRequest(first!.token, first!.source, FEEDBACK)
    expect(store.beginRequest()).not.toBeNull()
  })

  it('ignores responses for superseded tokens', () => {
    const store = storeWithBuffer('a = ?')
    const first = store.beginRequest()!
    store.failRequest(first.token, 'network down')
    const second = store.beginRequest()!
    store.resolveRequest(first.token, first.source, FEEDBACK) // late arrival
    expect(store.get().feedback).toBeNull()
    store.resolveRequest(second.token, second.source, FEEDBACK)
    expect(store.get().feedback).not.toBeNull()
  })

  it('matches feedback to the buffer content at request time', () => {
    const store = storeWithBuffer('my_sort = ?')
    const begun = store.beginRequest()!
    store.edit('my_sort = map ?')
    store.resolveRequest(begun.token, begun.source, FEEDBACK)
    expect(store.isStale()).toBe(true)
    store.edit(begun.source)
    expect(store.isStale()).toBe(false)
  })
})

describe('hint levels', () => {
  it('reveals one level at a time and never goes past the last', () => {
    const store = storeWithBuffer('x = ?')
    const begun = store.beginRequest()!
    store.resolveRequest(begun.token, begun.source, FEEDBACK)
    expect(store.get().hintLevel).toBe(0)
    expect(store.revealMore()).toBe(1)
    expect(store.revealMore()).toBe(2)
    expect(store.revealMore()).toBe(2)
  })

  it('resets to the lowest level on a fresh response', () => {
    const store = storeWithBuffer('x = ?')
    let begun = store.beginRequest()!
    store.resolveRequest(begun.token, begun.source, FEEDBACK)
    store.revealMore()
    begun = store.beginRequest()!
    store.resolveRequest(begun.token, begun.source, FEEDBACK)
    expect(store.get().hintLevel).toBe(0)
  })
})

describe('editing', () => {
  it('inserts a hole at the cursor', () => {
    const store = storeWithBuffer('my_sort = foldr  []')
    const cursor = store.insertHole('my_sort = foldr '.length)
    expect(store.get().buffer).toBe('my_sort = foldr ? []')
    expect(cursor).toBe('my_sort = foldr ?'.length)
  })

  it('selecting an exercise clears feedback', () => {
    const store = storeWithBuffer('x = 1')
    const begun = store.beginRequest()!
    store.resolveRequest(begun.token, begun.source, FEEDBACK)
    store.selectExercise('other', 'other = ?\n')
    expect(store.get().feedback).toBeNull()
    expect(store.get().buffer).toBe('other = ?\n')
  })
})
