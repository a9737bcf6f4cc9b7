/* tslint:disable */
/* eslint-disable */

export function check_ring(n: number, mult: Uint32Array, add: Uint32Array): string;

export function check_square(n: number, cells: Uint32Array): string;

export function group_names(n: number): string;

export function group_table(n: number, name: string, permute: boolean, seed: number): string;

export function random_square(n: number, seed: number): string;

export function ring(moduli: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly check_ring: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly check_square: (a: number, b: number, c: number) => [number, number, number, number];
    readonly group_names: (a: number) => [number, number, number, number];
    readonly group_table: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly random_square: (a: number, b: number) => [number, number, number, number];
    readonly ring: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
