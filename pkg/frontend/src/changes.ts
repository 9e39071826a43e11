/** Local change records captured from keystrokes. */

import type { ChangeRow } from './api.js'

export interface LocalChange {
	t: number
	pos: number
	deleted: string
	inserted: string
}

/** Apply one change to a buffer, verifying the text being deleted. */
export function splice(text: string, pos: number, deleted: string, inserted: string): string {
	const chars = [...text]
	const dlen = [...deleted].length // scalar count, not UTF-16 units
	const removed = chars.slice(pos, pos + dlen).join('')
	if (pos < 0 || pos + dlen > chars.length || removed !== deleted) {
		throw new Error(`buffer out of sync at ${pos}: expected ${JSON.stringify(deleted)}, found ${JSON.stringify(removed)}`)
	}
	return chars.slice(0, pos).join('') + inserted + chars.slice(pos + dlen).join('')
}

/** Wire rows for the rewrite endpoint, rebased so timestamps start at 0. */
export function toRows(changes: LocalChange[]): ChangeRow[] {
	const first = changes[0]
	const base = first ? first.t : 0
	return changes.map((c) => [c.t - base, c.pos, c.deleted, c.inserted])
}

// The protocol counts Unicode scalar values; DOM selections count UTF-16
// units. Convert at the DOM boundary so astral characters stay one position.

export function scalarOffset(text: string, utf16Offset: number): number {
	let scalars = 0
	let units = 0
	for (const ch of text) {
		if (units >= utf16Offset) break
		units += ch.length
		scalars += 1
	}
	return scalars
}

export function utf16Offset(text: string, scalarPos: number): number {
	let units = 0
	let scalars = 0
	for (const ch of text) {
		if (scalars >= scalarPos) break
		units += ch.length
		scalars += 1
	}
	return units
}
