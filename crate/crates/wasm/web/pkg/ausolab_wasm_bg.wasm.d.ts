/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_cube_free: (a: number, b: number) => void;
export const cube_dim: (a: number) => number;
export const cube_expected: (a: number, b: number) => number;
export const cube_greatest_decrease: (a: number, b: number) => [number, number];
export const cube_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const cube_random_edge: (a: number, b: number, c: number) => [number, number];
export const cube_ranks: (a: number) => [number, number];
export const cube_sample: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const cube_source: (a: number) => number;
export const hvector_bounds: (a: number, b: number) => [number, number, number, number];
export const klee_minty_sweep: (a: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
