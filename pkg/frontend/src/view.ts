/** DOM-light view helpers, kept pure enough to test. */

import { utf16Offset } from './changes.js'
import type { Interval } from './regions.js'

export interface Segment {
	text: string
	gray: boolean
}

/** Split a buffer into gray/editable runs (intervals in scalar offsets). */
export function backdropSegments(text: string, gray: Interval[]): Segment[] {
	const chars = [...text]
	const segments: Segment[] = []
	let prev = 0
	const push = (from: number, to: number, isGray: boolean) => {
		if (to > from) segments.push({ text: chars.slice(from, to).join(''), gray: isGray })
	}
	for (const iv of gray) {
		push(prev, iv.start, false)
		push(iv.start, iv.end, true)
		prev = iv.end
	}
	push(prev, chars.length, false)
	return segments
}

export function renderBackdrop(el: HTMLElement, text: string, gray: Interval[]): void {
	el.textContent = ''
	for (const segment of backdropSegments(text, gray)) {
		const span = el.ownerDocument.createElement('span')
		span.textContent = segment.text
		if (segment.gray) span.className = 'gray'
		el.appendChild(span)
	}
	// trailing sentinel keeps the backdrop's height in sync with the textarea
	el.appendChild(el.ownerDocument.createTextNode('​'))
}

/** Caret position (UTF-16) after an accepted keystroke, for restoring focus. */
export function caretAfter(text: string, pos: number, insertedScalars: number): number {
	return utf16Offset(text, pos + insertedScalars)
}
