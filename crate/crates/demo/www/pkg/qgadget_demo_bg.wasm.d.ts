/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const analyze_mmp: (a: number, b: number) => [number, number];
export const fixture_text: (a: number, b: number) => [number, number];
export const hardy_curve: (a: number) => [number, number];
export const prove_pair: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
