/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const bonus_curve: (a: number, b: number, c: number, d: number, e: bigint, f: number) => [number, number];
export const lake_search: (a: bigint, b: number, c: bigint) => [number, number, number, number];
export const successor_tails: (a: number, b: bigint, c: number, d: number, e: number, f: bigint, g: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
