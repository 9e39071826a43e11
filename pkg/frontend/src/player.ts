/**
 * Timed playback: steps through versions with the recording's pacing
 * scaled by a speed factor; seeking fetches the snapshot for a version.
 */

import type { EditorStore } from './state.js'

export class Player {
	playing = false
	speed = 1

	private timer: ReturnType<typeof setTimeout> | null = null

	constructor(private readonly store: EditorStore) {}

	private delayBefore(version: number): number {
		const cast = this.store.cast
		if (!cast) return 0
		const prev = version >= 2 ? cast.changes[version - 2]![0] : 0
		return Math.max(0, cast.changes[version - 1]![0] - prev)
	}

	play(): void {
		if (this.playing || !this.store.cast) return
		this.playing = true
		if (this.store.version >= this.store.changeCount) {
			void this.store.seek(0).then(() => this.scheduleNext())
		} else {
			this.scheduleNext()
		}
	}

	private scheduleNext(): void {
		if (!this.playing) return
		const next = this.store.version + 1
		if (next > this.store.changeCount) {
			this.pause()
			return
		}
		this.timer = setTimeout(() => {
			void this.store.seek(next).then(() => this.scheduleNext())
		}, this.delayBefore(next) / this.speed)
	}

	pause(): void {
		this.playing = false
		if (this.timer !== null) {
			clearTimeout(this.timer)
			this.timer = null
		}
	}

	async seek(version: number): Promise<void> {
		this.pause()
		await this.store.seek(version)
	}
}
