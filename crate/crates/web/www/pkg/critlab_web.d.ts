/* tslint:disable */
/* eslint-disable */

/**
 * `log N(T)` for the first simple root of `ι_d`, with the slope estimate
 * of the critical exponent.
 */
export function counting(name: string, d: number, radius: number): string;

/**
 * Limit set sample at `depth` and the shadow from the origin of the ball of
 * radius `r` around `word · o`.
 */
export function limit_set(name: string, depth: number, word: string, r: number): string;

/**
 * Positivity of the Veronese flags in `R^d` at the given boundary angles,
 * next to whether the angles are cyclically ordered.
 */
export function positivity(d: number, angles: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly counting: (a: number, b: number, c: number, d: number) => [number, number];
    readonly limit_set: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly positivity: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
