/**
 * Editable-region bookkeeping for edit mode.
 *
 * The service decides which ranges are rewritable; the client only tracks
 * where the editable intervals sit in the buffer as the user types, so
 * keystrokes outside them can be rejected before they ever reach the
 * replacement list. Intervals are half-open; a zero-width interval is a
 * caret where typing is allowed (a spot whose recorded text was deleted).
 */

export interface Interval {
	start: number
	end: number
}

/** Sort, merge overlapping/touching intervals, absorb boundary carets. */
export function normalize(intervals: Interval[]): Interval[] {
	const sorted = [...intervals].sort((a, b) => a.start - b.start || a.end - b.end)
	const out: Interval[] = []
	for (const iv of sorted) {
		const last = out[out.length - 1]
		if (last && iv.start <= last.end) {
			if (iv.end > last.end) last.end = iv.end
		} else {
			out.push({ ...iv })
		}
	}
	return out
}

/** Re-express the region after an edit inside it (same rules as the server). */
export function absorbChange(intervals: Interval[], pos: number, dlen: number, ilen: number): Interval[] {
	const cut = pos + dlen
	const delta = ilen - dlen
	const move = (e: number) => (e <= pos ? e : e >= cut ? e + delta : pos)
	const moved = intervals.map((iv) => ({ start: move(iv.start), end: move(iv.end) }))
	moved.push({ start: pos, end: pos + ilen })
	return normalize(moved)
}

/** Closed containment: does some interval fully admit [start, end]? */
export function withinClosed(intervals: Interval[], start: number, end: number): boolean {
	return intervals.some((iv) => iv.start <= start && end <= iv.end)
}

/** The read-only complement: exactly what gets the gray background. */
export function complement(intervals: Interval[], length: number): Interval[] {
	const out: Interval[] = []
	let prev = 0
	for (const iv of normalize(intervals)) {
		if (iv.start > prev) out.push({ start: prev, end: iv.start })
		prev = Math.max(prev, iv.end)
	}
	if (prev < length) out.push({ start: prev, end: length })
	return out
}
