/**
 * Editor state machine.
 *
 * Normal mode shows a snapshot and lets the user pick a history range by
 * timeline drag or text selection; every selection is validated through the
 * service, and the Select button is enabled exactly when the last validation
 * came back ok (an invalid text selection is additionally flagged red).
 * Edit mode holds the snapshot at the range start, the editable intervals,
 * and the replacement changes captured so far; Done posts the rewrite and on
 * success refetches the cast, while a 409/422 keeps edit mode open with the
 * error on display. The conflict algebra itself lives server-side only.
 */

import { ApiError, CastPayload, ConflictJson, RangeJson, ServiceApi } from './api.js'
import { LocalChange, splice, toRows } from './changes.js'
import { absorbChange, complement, Interval, normalize, withinClosed } from './regions.js'

export type Mode = 'normal' | 'edit'
export type SelectionSource = 'time' | 'text'

export interface Selection {
	range: RangeJson
	source: SelectionSource
	ok: boolean
	conflicts: ConflictJson[]
	editable: Interval[]
}

export interface EditSession {
	range: RangeJson
	baseText: string
	text: string
	editable: Interval[]
	replacement: LocalChange[]
	startedAt: number
}

type Listener = () => void

export class EditorStore {
	mode: Mode = 'normal'
	cast: CastPayload | null = null
	revToken = 0
	version = 0
	text = ''
	selection: Selection | null = null
	edit: EditSession | null = null
	error: string | null = null

	private listeners: Listener[] = []

	constructor(
		private readonly api: ServiceApi,
		private readonly clock: () => number = () => Date.now(),
	) {}

	subscribe(listener: Listener): () => void {
		this.listeners.push(listener)
		return () => {
			this.listeners = this.listeners.filter((l) => l !== listener)
		}
	}

	private emit(): void {
		for (const listener of this.listeners) listener()
	}

	get changeCount(): number {
		return this.cast ? this.cast.changes.length : 0
	}

	/** True exactly when the last validation response was ok. */
	get selectEnabled(): boolean {
		return this.mode === 'normal' && this.selection !== null && this.selection.ok
	}

	/** Red styling applies to invalid text-based selections. */
	get selectionInvalid(): boolean {
		return this.selection !== null && !this.selection.ok && this.selection.source === 'text'
	}

	async load(): Promise<void> {
		this.cast = await this.api.getCast()
		this.revToken = this.cast.rev_token
		await this.seek(this.cast.changes.length)
	}

	async seek(version: number): Promise<void> {
		const snap = await this.api.snapshot(version)
		this.version = snap.version
		this.text = snap.text
		this.emit()
	}

	async selectByTime(t0: number, t1: number): Promise<void> {
		let range: RangeJson
		try {
			range = await this.api.selectTime(t0, t1)
		} catch (err) {
			if (err instanceof ApiError && err.code === 'EmptySelection') {
				this.clearSelection()
				return
			}
			throw err
		}
		await this.validateSelection(range, 'time')
	}

	async selectByText(start: number, end: number): Promise<void> {
		if (start === end) return // caret selections touch nothing
		let range: RangeJson
		try {
			range = await this.api.selectText(this.version, start, end)
		} catch (err) {
			if (err instanceof ApiError && err.code === 'EmptySelection') {
				this.clearSelection()
				return
			}
			throw err
		}
		await this.validateSelection(range, 'text')
	}

	private async validateSelection(range: RangeJson, source: SelectionSource): Promise<void> {
		const report = await this.api.validate(range.start, range.end)
		this.selection = {
			range,
			source,
			ok: report.ok,
			conflicts: report.conflicts,
			editable: normalize(report.editable),
		}
		this.error = null
		this.emit()
	}

	clearSelection(): void {
		this.selection = null
		this.emit()
	}

	async enterEditMode(): Promise<void> {
		if (!this.selectEnabled || !this.selection) throw new Error('no valid selection')
		const sel = this.selection
		const snap = await this.api.snapshot(sel.range.start)
		this.edit = {
			range: sel.range,
			baseText: snap.text,
			text: snap.text,
			editable: sel.editable.map((iv) => ({ ...iv })),
			replacement: [],
			startedAt: this.clock(),
		}
		this.mode = 'edit'
		this.error = null
		this.emit()
	}

	/**
	 * Try to record one keystroke-level edit (scalar offsets). Returns false,
	 * without touching the buffer, when the edit leaves the editable region.
	 */
	captureKeystroke(pos: number, deleted: string, inserted: string): boolean {
		if (!this.edit) return false
		if (!deleted && !inserted) return false
		if (!withinClosed(this.edit.editable, pos, pos + [...deleted].length)) {
			this.emit() // lets views flash the rejection
			return false
		}
		this.edit.text = splice(this.edit.text, pos, deleted, inserted)
		this.edit.editable = absorbChange(this.edit.editable, pos, [...deleted].length, [...inserted].length)
		this.edit.replacement.push({ t: this.clock() - this.edit.startedAt, pos, deleted, inserted })
		this.emit()
		return true
	}

	/** Gray decorations: the complement of the editable intervals. */
	grayRegions(): Interval[] {
		if (!this.edit) return []
		return complement(this.edit.editable, [...this.edit.text].length)
	}

	async done(): Promise<void> {
		if (!this.edit) throw new Error('not in edit mode')
		const { range, replacement } = this.edit
		try {
			const result = await this.api.rewrite(range.start, range.end, toRows(replacement), this.revToken)
			this.revToken = result.rev_token
		} catch (err) {
			if (err instanceof ApiError && (err.status === 409 || err.status === 422)) {
				this.error = `${err.code}: ${err.message}`
				this.emit()
				return // stay in edit mode
			}
			throw err
		}
		this.edit = null
		this.mode = 'normal'
		this.selection = null
		await this.load()
	}

	cancelEdit(): void {
		this.edit = null
		this.mode = 'normal'
		this.error = null
		this.emit()
	}
}
