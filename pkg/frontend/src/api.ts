/** Typed client for the textcast JSON service. */

/** One change on the wire: [t_ms, pos, deleted, inserted]. */
export type ChangeRow = [number, number, string, string]

export interface CastPayload {
	header: { textcast: number; initial: string; [key: string]: unknown }
	changes: ChangeRow[]
	duration_ms: number
	rev_token: number
}

export interface RangeJson {
	start: number
	end: number
}

export interface IntervalJson {
	start: number
	end: number
}

export interface ConflictJson {
	seq: number
	frame_version: number
	footprint: { kind: string; start: number; end: number }
	interval: IntervalJson
}

export interface ValidateJson {
	ok: boolean
	conflicts: ConflictJson[]
	editable: IntervalJson[]
}

export interface SnapshotJson {
	version: number
	text: string
}

export interface RewriteJson {
	rev_token: number
	summary: { changes: number; duration_ms: number; final_length: number }
}

export class ApiError extends Error {
	constructor(
		readonly status: number,
		readonly code: string,
		message: string,
		readonly details?: unknown,
	) {
		super(message)
	}
}

async function parseError(resp: Response): Promise<ApiError> {
	try {
		const body = await resp.json()
		return new ApiError(resp.status, body.code ?? 'Unknown', body.message ?? resp.statusText, body.details)
	} catch {
		return new ApiError(resp.status, 'Unknown', resp.statusText)
	}
}

/** What the editor needs from the service; ApiClient is the real one. */
export interface ServiceApi {
	getCast(): Promise<CastPayload>
	snapshot(version: number): Promise<SnapshotJson>
	selectTime(t0: number, t1: number): Promise<RangeJson>
	selectText(version: number, start: number, end: number): Promise<RangeJson>
	validate(start: number, end: number): Promise<ValidateJson>
	rewrite(start: number, end: number, replacement: ChangeRow[], revToken: number): Promise<RewriteJson>
}

export class ApiClient implements ServiceApi {
	constructor(private readonly base = '') {}

	private async request<T>(path: string, init?: RequestInit): Promise<T> {
		const resp = await fetch(this.base + path, init)
		if (!resp.ok) throw await parseError(resp)
		return (await resp.json()) as T
	}

	private post<T>(path: string, payload: unknown): Promise<T> {
		return this.request<T>(path, {
			method: 'POST',
			headers: { 'Content-Type': 'application/json' },
			body: JSON.stringify(payload),
		})
	}

	getCast(): Promise<CastPayload> {
		return this.request('/api/cast')
	}

	snapshot(version: number): Promise<SnapshotJson> {
		return this.request(`/api/snapshot?version=${version}`)
	}

	selectTime(t0: number, t1: number): Promise<RangeJson> {
		return this.post('/api/select/time', { t0, t1 })
	}

	selectText(version: number, start: number, end: number): Promise<RangeJson> {
		return this.post('/api/select/text', { version, start, end })
	}

	validate(start: number, end: number): Promise<ValidateJson> {
		return this.post('/api/validate', { start, end })
	}

	rewrite(start: number, end: number, replacement: ChangeRow[], revToken: number): Promise<RewriteJson> {
		return this.post('/api/rewrite', { start, end, replacement, rev_token: revToken })
	}
}
