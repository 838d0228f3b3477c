// End-to-end round trip against a live tutor service: scenario 1 is
// POSTed through the real client and rendered. Gated behind RUN_LIVE=1
// so the default `npm test` stays hermetic; `npm run test:live` starts
// the Python service itself.

import { spawn, type ChildProcess } from 'node:child_process'
import { dirname, join } from 'node:path'
import { fileURLToPath } from 'node:url'
import { afterAll, beforeAll, describe, expect, it } from 'vitest'

import { TutorApi } from '../src/api'
import { renderFeedback } from '../src/render'

const RUN = process.env.RUN_LIVE === '1'
const PORT = 8765
const BASE = `http://127.0.0.1:${PORT}`

let server: ChildProcess | null = null

async function waitForHealth(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/api/health`)
      if (response.ok) return
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 300))
  }
  throw new Error('tutor service did not come up')
}

describe.runIf(RUN)('live round trip', () => {
  beforeAll(async () => {
    server = spawn(
      'python3',
      ['-m', 'uvicorn', '--factory', 'minitutor.service:create_app',
       '--port', String(PORT)],
      { cwd: join(dirname(fileURLToPath(import.meta.url)), '..', '..'), stdio: 'ignore' },
    )
    await waitForHealth(30_000)
  }, 40_000)

  afterAll(() => {
    server?.kill()
  })

  it('lists the bundled exercise', async () => {
    const api = new TutorApi(BASE)
    const exercises = await api.listExercises()
    expect(exercises.map((e) => e.id)).toContain('my_sort')
  })

  it('round-trips scenario 1 and renders it', async () => {
    const api = new TutorApi(BASE)
    const source = 'my_sort = foldr (:) []'
    const feedback = await api.requestFeedback('my_sort', source)

    expect(feedback.classification).toBe('OffTrack')
    expect(feedback.counterexample).not.toBeNull()
    expect(feedback.violated_properties).toEqual(['sort_nondescending'])

    document.body.innerHTML = '<div id="c"></div>'
    const container = document.querySelector('#c') as HTMLElement
    renderFeedback(container, feedback, 0, source)
    const banner = container.querySelector('.banner') as HTMLElement
    expect(banner.dataset.classification).toBe('OffTrack')
    const cex = container.querySelector('.panel-counterexample pre') as HTMLElement
    expect(cex.textContent).toBe(feedback.counterexample!.text)
  }, 30_000)

  it('surfaces 404s as errors', async () => {
    const api = new TutorApi(BASE)
    await expect(api.requestFeedback('nope', 'x = 1')).rejects.toMatchObject({
      status: 404,
    })
  })
})

describe('live suite gating', () => {
  it.runIf(!RUN)('is skipped unless RUN_LIVE=1', () => {
    expect(RUN).toBe(false)
  })
})
