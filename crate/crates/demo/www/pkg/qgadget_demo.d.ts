/* tslint:disable */
/* eslint-disable */

/**
 * State count and classical relations for a hypergraph in MMP or JSON form.
 */
export function analyze_mmp(text: string): string;

/**
 * A built-in fixture as JSON (original labels) and MMP (relabeled), for the
 * example picker.
 */
export function fixture_text(name: string): string;

/**
 * `P(dd)` on an `n`-point grid plus both maximizers.
 */
export function hardy_curve(n: number): string;

/**
 * Propagation proof that atoms `a` and `b` cannot both be true.
 */
export function prove_pair(text: string, a: string, b: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly analyze_mmp: (a: number, b: number) => [number, number];
    readonly fixture_text: (a: number, b: number) => [number, number];
    readonly hardy_curve: (a: number) => [number, number];
    readonly prove_pair: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
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
