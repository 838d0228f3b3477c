// Thin client over the tutor service HTTP API.

import type { ExerciseDetail, ExerciseInfo, FeedbackResponse } from './types'
import { isFeedbackResponse } from './types'

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
    readonly retryable: boolean = false,
  ) {
    super(message)
  }
}

export class TutorApi {
  constructor(readonly baseUrl: string = '') {}

  private async get<T>(path: string): Promise<T> {
    let response: Response
    try {
      response = await fetch(this.baseUrl + path)
    } catch (err) {
      throw new ApiError(`cannot reach the tutor service: ${err}`, null, true)
    }
    if (!response.ok) {
      throw new ApiError(await errText(response), response.status, response.status >= 500)
    }
    return (await response.json()) as T
  }

  listExercises(): Promise<ExerciseInfo[]> {
    return this.get('/api/exercises')
  }

  getExercise(id: string): Promise<ExerciseDetail> {
    return this.get(`/api/exercises/${encodeURIComponent(id)}`)
  }

  async requestFeedback(exerciseId: string, source: string, budgetMs?: number):
      Promise<FeedbackResponse> {
    if (!source.trim()) {
      throw new ApiError('the editor is empty', null, false)
    }
    let response: Response
    try {
      response = await fetch(
        `${this.baseUrl}/api/exercises/${encodeURIComponent(exerciseId)}/feedback`,
        {
          method: 'POST',
          headers: { 'content-type': 'application/json' },
          body: JSON.stringify(budgetMs ? { source, budget_ms: budgetMs } : { source }),
        },
      )
    } catch (err) {
      throw new ApiError(`cannot reach the tutor service: ${err}`, null, true)
    }
    if (!response.ok) {
      throw new ApiError(await errText(response), response.status, response.status >= 500)
    }
    const body: unknown = await response.json()
    if (!isFeedbackResponse(body)) {
      throw new ApiError('response does not match the feedback schema', response.status)
    }
    return body
  }
}

async function errText(response: Response): Promise<string> {
  try {
    const body = await response.json()
    if (body && typeof body.detail === 'string') return body.detail
  } catch {
    // fall through to the status line
  }
  return `request failed with status ${response.status}`
}
