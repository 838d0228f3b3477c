// Wire types for the tutor service API. These mirror the server's JSON
// exactly; rendering must never re-format server-provided text.

export type Classification =
  | 'Correct'
  | 'OnTrack'
  | 'OffTrack'
  | 'TooComplex'
  | 'Inconclusive'

export interface LocalExampleWire {
  text: string
  env: Record<string, unknown>
  args: unknown[]
  expected: unknown
  source_input?: unknown | null
}

export interface CounterexampleWire {
  input: unknown
  expected: unknown
  actual: unknown | null
  text: string
  actual_text: string
  contains_hole: boolean
  error: string | null
}

export interface ConflictGroupWire {
  examples: LocalExampleWire[]
}

export interface ConflictWire {
  hole: number
  groups: ConflictGroupWire[]
  pair: LocalExampleWire[]
}

export interface HoleSpecWire {
  hole: number
  examples: LocalExampleWire[]
}

export interface RepairWire {
  program: string
  replaced_paths: number[][]
  replaced: string[]
}

export interface ErrorWire {
  kind: string
  message: string
  line: number | null
  col: number | null
}

export interface FeedbackResponse {
  classification: Classification
  exercise_id: string
  counterexample: CounterexampleWire | null
  violated_properties: string[]
  properties_skipped: boolean
  conflict: ConflictWire | null
  hole_specs: HoleSpecWire[]
  repair: RepairWire | null
  advice: string | null
  error: ErrorWire | null
  diagnostics: Record<string, unknown>
}

export interface ExerciseInfo {
  id: string
  description: string
  signature: string
}

export interface ExerciseDetail extends ExerciseInfo {
  entry: string
  prelude: string[]
  properties: string[]
}

export function isFeedbackResponse(value: unknown): value is FeedbackResponse {
  if (typeof value !== 'object' || value === null) return false
  const v = value as Record<string, unknown>
  const classifications = ['Correct', 'OnTrack', 'OffTrack', 'TooComplex', 'Inconclusive']
  return (
    typeof v.classification === 'string' &&
    classifications.includes(v.classification) &&
    typeof v.exercise_id === 'string' &&
    Array.isArray(v.violated_properties) &&
    Array.isArray(v.hole_specs)
  )
}
