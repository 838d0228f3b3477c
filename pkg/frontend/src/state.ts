// View state: one selected exercise, one editor buffer, at most one
// request in flight. Responses are matched to the buffer content they
// were requested for; anything else renders as stale. Hint detail is a
// client-side reveal over one response, so asking for more never hits
// the server again.

import type { FeedbackResponse } from './types'

export type HintLevel = 0 | 1 | 2
// 0: classification + counterexample/conflict; 1: + hole specs; 2: + repair

export interface ViewState {
  exerciseId: string | null
  buffer: string
  inFlight: boolean
  requestToken: number
  feedback: FeedbackResponse | null
  feedbackFor: string | null // buffer content the feedback answers
  hintLevel: HintLevel
  errorMessage: string | null
}

export function initialState(): ViewState {
  return {
    exerciseId: null,
    buffer: '',
    inFlight: false,
    requestToken: 0,
    feedback: null,
    feedbackFor: null,
    hintLevel: 0,
    errorMessage: null,
  }
}

export class Store {
  private state: ViewState = initialState()
  private listeners: Array<(s: ViewState) => void> = []

  get(): ViewState {
    return this.state
  }

  subscribe(fn: (s: ViewState) => void): void {
    this.listeners.push(fn)
  }

  private set(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch }
    for (const fn of this.listeners) fn(this.state)
  }

  selectExercise(id: string, starter: string = ''): void {
    this.set({
      exerciseId: id,
      buffer: starter,
      feedback: null,
      feedbackFor: null,
      hintLevel: 0,
      errorMessage: null,
    })
  }

  edit(buffer: string): void {
    this.set({ buffer })
  }

  insertHole(at: number): number {
    const text = this.state.buffer
    this.set({ buffer: text.slice(0, at) + '?' + text.slice(at) })
    return at + 1
  }

  /** Begin a request; returns a token or null when one is already running. */
  beginRequest(): { token: number; source: string } | null {
    if (this.state.inFlight) return null
    const token = this.state.requestToken + 1
    this.set({ inFlight: true, requestToken: token, errorMessage: null })
    return { token, source: this.state.buffer }
  }

  /** Resolve a request; ignored unless the token is the active one. */
  resolveRequest(token: number, source: string, feedback: FeedbackResponse): void {
    if (token !== this.state.requestToken) return
    this.set({
      inFlight: false,
      feedback,
      feedbackFor: source,
      hintLevel: 0,
    })
  }

  failRequest(token: number, message: string): void {
    if (token !== this.state.requestToken) return
    this.set({ inFlight: false, errorMessage: message })
  }

  /** Reveal the next hint layer; never skips a level. */
  revealMore(): HintLevel {
    const next = Math.min(this.state.hintLevel + 1, 2) as HintLevel
    this.set({ hintLevel: next })
    return next
  }

  isStale(): boolean {
    return this.state.feedback !== null && this.state.feedbackFor !== this.state.buffer
  }
}
