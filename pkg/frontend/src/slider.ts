/**
 * History slider: every change plotted at (time or index, offset), with the
 * selected range as a yellow band. Layout is a pure function so it can be
 * tested without a canvas; drawing is a thin pass over the layout.
 */

import type { CastPayload } from './api.js'
import type { Selection } from './state.js'

export type Axis = 'time' | 'seq'

export interface SliderMark {
	seq: number
	x: number // 0..1
	y: number // 0..1
	t: number
	pos: number
}

export interface SliderBand {
	x0: number // 0..1
	x1: number
	ok: boolean
}

export interface SliderLayout {
	marks: SliderMark[]
	band: SliderBand | null
	maxT: number
	maxPos: number
}

export function sliderLayout(cast: CastPayload | null, selection: Selection | null, axis: Axis): SliderLayout {
	if (!cast || cast.changes.length === 0) {
		return { marks: [], band: null, maxT: 0, maxPos: 0 }
	}
	const n = cast.changes.length
	const maxT = Math.max(cast.duration_ms, 1)
	const maxPos = Math.max(...cast.changes.map((c) => c[1]), 1)
	const xOf = (seq: number, t: number) => (axis === 'time' ? t / maxT : n === 1 ? 0 : seq / (n - 1))
	const marks = cast.changes.map((c, seq) => ({
		seq,
		x: xOf(seq, c[0]),
		y: c[1] / maxPos,
		t: c[0],
		pos: c[1],
	}))
	let band: SliderBand | null = null
	if (selection) {
		const picked = marks.slice(selection.range.start, selection.range.end)
		if (picked.length > 0) {
			band = {
				x0: Math.min(...picked.map((m) => m.x)),
				x1: Math.max(...picked.map((m) => m.x)),
				ok: selection.ok,
			}
		}
	}
	return { marks, band, maxT, maxPos }
}

/** Convert a horizontal drag (fractions of the width) into a time window. */
export function dragToWindow(layout: SliderLayout, x0: number, x1: number): { t0: number; t1: number } {
	const lo = Math.max(0, Math.min(x0, x1))
	const hi = Math.min(1, Math.max(x0, x1))
	return { t0: Math.floor(lo * layout.maxT), t1: Math.ceil(hi * layout.maxT) }
}

const PAD = 8

export function drawSlider(canvas: HTMLCanvasElement, layout: SliderLayout): void {
	const ctx = canvas.getContext('2d')
	if (!ctx) return
	const { width, height } = canvas
	ctx.clearRect(0, 0, width, height)
	const px = (x: number) => PAD + x * (width - 2 * PAD)
	const py = (y: number) => height - PAD - y * (height - 2 * PAD)

	if (layout.band) {
		ctx.fillStyle = layout.band.ok ? 'rgba(250, 204, 21, 0.45)' : 'rgba(248, 113, 113, 0.45)'
		ctx.fillRect(px(layout.band.x0) - 3, 0, px(layout.band.x1) - px(layout.band.x0) + 6, height)
	}
	ctx.strokeStyle = '#94a3b8'
	ctx.beginPath()
	ctx.moveTo(PAD, height - PAD)
	ctx.lineTo(width - PAD, height - PAD)
	ctx.stroke()
	ctx.fillStyle = '#0f172a'
	for (const mark of layout.marks) {
		ctx.beginPath()
		ctx.arc(px(mark.x), py(mark.y), 2.5, 0, Math.PI * 2)
		ctx.fill()
	}
}
