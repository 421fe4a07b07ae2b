/* tslint:disable */
/* eslint-disable */

/**
 * `B(t, s)` for `s = 1..=s_max` at a fixed `t`.
 */
export function bonus_curve(alpha: number, beta: number, xi: number, eta: number, t: bigint, s_max: number): Float64Array;

/**
 * Per-cell optimal values next to one search per non-terminal cell with
 * `simulations` passes.
 */
export function lake_search(simulations: bigint, max_depth: number, seed: bigint): string;

/**
 * Empirical tails of `N − np` for a Binomial successor count, against the
 * polynomial bound, for `z = 1..=z_max`.
 */
export function successor_tails(p: number, n: bigint, eta: number, xi: number, z_max: number, trials: bigint, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bonus_curve: (a: number, b: number, c: number, d: number, e: bigint, f: number) => [number, number];
    readonly lake_search: (a: bigint, b: number, c: bigint) => [number, number, number, number];
    readonly successor_tails: (a: number, b: bigint, c: number, d: number, e: number, f: bigint, g: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
