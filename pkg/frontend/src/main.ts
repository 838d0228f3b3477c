// Application entry: exercise picker, editor with a hole button, a
// check button, and the feedback panel with step-wise hint reveal.

import { ApiError, TutorApi } from './api'
import { renderFeedback, nextHintLabel } from './render'
import { Store } from './state'
import './style.css'

const api = new TutorApi(import.meta.env?.VITE_TUTOR_URL ?? '')
const store = new Store()

function mount(root: HTMLElement): void {
  root.innerHTML = `
    <header>
      <h1>minitutor</h1>
      <select id="exercise-picker"><option>loading…</option></select>
    </header>
    <p id="exercise-description"></p>
    <div class="workbench">
      <div class="editor-pane">
        <div class="toolbar">
          <button id="insert-hole" title="insert a hole at the cursor">insert ?</button>
          <button id="check">check</button>
          <span id="busy" hidden>checking…</span>
        </div>
        <textarea id="editor" spellcheck="false" rows="14"></textarea>
      </div>
      <div class="result-pane">
        <div id="feedback"></div>
        <button id="more-hints" hidden></button>
        <div id="request-error" class="banner banner-schema-error" hidden></div>
      </div>
    </div>
  `

  const picker = root.querySelector('#exercise-picker') as HTMLSelectElement
  const description = root.querySelector('#exercise-description') as HTMLElement
  const editor = root.querySelector('#editor') as HTMLTextAreaElement
  const holeButton = root.querySelector('#insert-hole') as HTMLButtonElement
  const checkButton = root.querySelector('#check') as HTMLButtonElement
  const busy = root.querySelector('#busy') as HTMLElement
  const feedbackPane = root.querySelector('#feedback') as HTMLElement
  const moreButton = root.querySelector('#more-hints') as HTMLButtonElement
  const requestError = root.querySelector('#request-error') as HTMLElement

  store.subscribe((state) => {
    busy.hidden = !state.inFlight
    checkButton.disabled = state.inFlight
    if (editor.value !== state.buffer) editor.value = state.buffer
    requestError.hidden = state.errorMessage === null
    requestError.textContent = state.errorMessage ?? ''
    if (state.feedback) {
      renderFeedback(feedbackPane, state.feedback, state.hintLevel,
                     state.feedbackFor ?? '', store.isStale())
      const label = nextHintLabel(state.feedback, state.hintLevel)
      moreButton.hidden = label === null
      moreButton.textContent = label ?? ''
    } else {
      feedbackPane.textContent = ''
      moreButton.hidden = true
    }
  })

  editor.addEventListener('input', () => store.edit(editor.value))
  holeButton.addEventListener('click', () => {
    const cursor = store.insertHole(editor.selectionStart ?? editor.value.length)
    editor.focus()
    editor.setSelectionRange(cursor, cursor)
  })
  moreButton.addEventListener('click', () => store.revealMore())

  checkButton.addEventListener('click', async () => {
    const state = store.get()
    if (!state.exerciseId) return
    const begun = store.beginRequest()
    if (!begun) return
    try {
      const feedback = await api.requestFeedback(state.exerciseId, begun.source)
      store.resolveRequest(begun.token, begun.source, feedback)
    } catch (err) {
      const message = err instanceof ApiError
        ? (err.retryable ? `${err.message} — try again` : err.message)
        : String(err)
      store.failRequest(begun.token, message)
    }
  })

  picker.addEventListener('change', async () => {
    const detail = await api.getExercise(picker.value)
    description.textContent = detail.description
    store.selectExercise(detail.id, `${detail.entry} = ?\n`)
  })

  api.listExercises().then(async (exercises) => {
    picker.innerHTML = ''
    for (const info of exercises) {
      const option = document.createElement('option')
      option.value = info.id
      option.textContent = `${info.id} :: ${info.signature}`
      picker.appendChild(option)
    }
    if (exercises.length > 0) {
      picker.value = exercises[0].id
      picker.dispatchEvent(new Event('change'))
    }
  }).catch((err) => {
    description.textContent = `cannot load exercises: ${err}`
  })
}

mount(document.querySelector('#app') as HTMLElement)
