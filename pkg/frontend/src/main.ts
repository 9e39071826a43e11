/** Wires the editor together against the service hosting this bundle. */

import { ApiClient } from './api.js'
import { scalarOffset } from './changes.js'
import { Player } from './player.js'
import { Axis, dragToWindow, drawSlider, sliderLayout } from './slider.js'
import { EditorStore } from './state.js'
import { caretAfter, renderBackdrop } from './view.js'

function el<T extends HTMLElement>(id: string): T {
	const node = document.getElementById(id)
	if (!node) throw new Error(`missing #${id}`)
	return node as T
}

const store = new EditorStore(new ApiClient())
const player = new Player(store)

const slider = el<HTMLCanvasElement>('slider')
const textArea = el<HTMLTextAreaElement>('text')
const backdrop = el<HTMLDivElement>('backdrop')
const selectBtn = el<HTMLButtonElement>('select-btn')
const doneBtn = el<HTMLButtonElement>('done-btn')
const cancelBtn = el<HTMLButtonElement>('cancel-btn')
const playBtn = el<HTMLButtonElement>('play-btn')
const speedSel = el<HTMLSelectElement>('speed')
const axisSel = el<HTMLSelectElement>('axis')
const seek = el<HTMLInputElement>('seek')
const versionLabel = el<HTMLSpanElement>('version-label')
const status = el<HTMLDivElement>('status')

let axis: Axis = 'time'
let pendingCaret: number | null = null

function render(): void {
	const editing = store.mode === 'edit'
	textArea.readOnly = !editing
	textArea.classList.toggle('editing', editing)
	textArea.classList.toggle('invalid-selection', store.selectionInvalid)

	const shownText = editing && store.edit ? store.edit.text : store.text
	if (textArea.value !== shownText) textArea.value = shownText
	if (pendingCaret !== null) {
		textArea.setSelectionRange(pendingCaret, pendingCaret)
		pendingCaret = null
	}

	if (editing && store.edit) {
		renderBackdrop(backdrop, store.edit.text, store.grayRegions())
	} else {
		backdrop.textContent = ''
	}

	selectBtn.disabled = !store.selectEnabled
	doneBtn.hidden = cancelBtn.hidden = !editing
	selectBtn.hidden = editing
	playBtn.textContent = player.playing ? 'Pause' : 'Play'
	playBtn.disabled = editing

	seek.max = String(store.changeCount)
	seek.value = String(store.version)
	seek.disabled = editing
	versionLabel.textContent = editing
		? `editing @${store.edit?.range.start}:${store.edit?.range.end}`
		: `version ${store.version}/${store.changeCount}`

	if (store.error) {
		status.textContent = store.error
		status.className = 'status error'
	} else if (store.selection && !store.selection.ok) {
		const seqs = store.selection.conflicts.map((c) => c.seq).join(', ')
		status.textContent = `selection ${store.selection.range.start}:${store.selection.range.end} is ambiguous (conflicting changes: ${seqs})`
		status.className = 'status warn'
	} else if (store.selection) {
		status.textContent = `selected range ${store.selection.range.start}:${store.selection.range.end}`
		status.className = 'status'
	} else {
		status.textContent = editing ? 'type inside the white regions, then press Done' : 'drag on the slider or select text to pick a range'
		status.className = 'status'
	}

	drawSlider(slider, sliderLayout(store.cast, store.selection, axis))
}

store.subscribe(render)

// -- timeline drag selection --------------------------------------------

let dragStart: number | null = null
const fraction = (event: MouseEvent) => {
	const rect = slider.getBoundingClientRect()
	return (event.clientX - rect.left) / rect.width
}
slider.addEventListener('mousedown', (event) => {
	if (store.mode !== 'normal') return
	dragStart = fraction(event)
})
window.addEventListener('mouseup', (event) => {
	if (dragStart === null || store.mode !== 'normal') {
		dragStart = null
		return
	}
	const from = dragStart
	dragStart = null
	const window_ = dragToWindow(sliderLayout(store.cast, null, axis), from, fraction(event))
	void store.selectByTime(window_.t0, window_.t1).catch(showError)
})

// -- text-span selection ------------------------------------------------

function reportTextSelection(): void {
	if (store.mode !== 'normal') return
	const { selectionStart, selectionEnd, value } = textArea
	if (selectionStart === selectionEnd) return
	void store
		.selectByText(scalarOffset(value, selectionStart), scalarOffset(value, selectionEnd))
		.catch(showError)
}
textArea.addEventListener('mouseup', reportTextSelection)
textArea.addEventListener('keyup', (event) => {
	if (event.shiftKey || event.key === 'Shift') reportTextSelection()
})

// -- edit-mode keystroke capture -----------------------------------------

textArea.addEventListener('beforeinput', (event) => {
	if (store.mode !== 'edit') return
	event.preventDefault()
	const value = textArea.value
	let start = scalarOffset(value, textArea.selectionStart)
	let end = scalarOffset(value, textArea.selectionEnd)
	let inserted = ''
	switch (event.inputType) {
		case 'insertText':
		case 'insertFromPaste':
		case 'insertReplacementText':
			inserted = event.data ?? event.dataTransfer?.getData('text/plain') ?? ''
			break
		case 'insertLineBreak':
		case 'insertParagraph':
			inserted = '\n'
			break
		case 'deleteContentBackward':
			if (start === end) start = Math.max(0, start - 1)
			break
		case 'deleteContentForward':
			if (start === end) end = Math.min([...value].length, end + 1)
			break
		default:
			return
	}
	const chars = [...value]
	const deleted = chars.slice(start, end).join('')
	if (!deleted && !inserted) return
	if (store.captureKeystroke(start, deleted, inserted)) {
		pendingCaret = caretAfter(store.edit!.text, start, [...inserted].length)
	} else {
		textArea.classList.remove('rejected')
		void textArea.offsetWidth // restart the animation
		textArea.classList.add('rejected')
	}
})

// -- buttons and playback -------------------------------------------------

function showError(err: unknown): void {
	status.textContent = err instanceof Error ? err.message : String(err)
	status.className = 'status error'
}

selectBtn.addEventListener('click', () => void store.enterEditMode().catch(showError))
doneBtn.addEventListener('click', () => void store.done().catch(showError))
cancelBtn.addEventListener('click', () => store.cancelEdit())
playBtn.addEventListener('click', () => {
	if (player.playing) player.pause()
	else player.play()
	render()
})
speedSel.addEventListener('change', () => {
	player.speed = Number(speedSel.value)
})
axisSel.addEventListener('change', () => {
	axis = axisSel.value as Axis
	render()
})
seek.addEventListener('input', () => void player.seek(Number(seek.value)).catch(showError))

void store.load().catch(showError)
