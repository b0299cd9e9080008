/* tslint:disable */
/* eslint-disable */

/**
 * A small cube orientation the page can draw and walk on.
 */
export class Cube {
    free(): void;
    [Symbol.dispose](): void;
    dim(): number;
    /**
     * Expected number of vertices a random-edge walk visits from `start`.
     */
    expected(start: number): number;
    greatest_decrease(start: number): Uint32Array;
    /**
     * `family` is `klee-minty` or `cube-linear`; `seed` only matters for the latter.
     */
    constructor(family: string, d: number, seed: number);
    random_edge(start: number, seed: number): Uint32Array;
    ranks(): Uint32Array;
    /**
     * `[mean, stderr]` of the random-edge walk length over `trials` runs.
     */
    sample(start: number, trials: number, seed: number): Float64Array;
    source(): number;
}

/**
 * `[maxmin, dual(1/4), dual(1/2), dual(1), 13n/sqrt(d), symmetric, unimodal]`
 * for an h-vector typed by hand.
 */
export function hvector_bounds(h: Uint32Array): Float64Array;

/**
 * Rows of `[d, expected, maxmin, 13n/sqrt(d)]` for Klee-Minty cubes of
 * dimension `1..=max_d`, flattened.
 */
export function klee_minty_sweep(max_d: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_cube_free: (a: number, b: number) => void;
    readonly cube_dim: (a: number) => number;
    readonly cube_expected: (a: number, b: number) => number;
    readonly cube_greatest_decrease: (a: number, b: number) => [number, number];
    readonly cube_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly cube_random_edge: (a: number, b: number, c: number) => [number, number];
    readonly cube_ranks: (a: number) => [number, number];
    readonly cube_sample: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly cube_source: (a: number) => number;
    readonly hvector_bounds: (a: number, b: number) => [number, number, number, number];
    readonly klee_minty_sweep: (a: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
