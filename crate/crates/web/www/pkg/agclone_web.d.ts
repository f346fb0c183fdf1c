/* tslint:disable */
/* eslint-disable */

/**
 * Whether a named rule (`delta`, `nu`, `lambda`, `mu`, `a3`, `a4`) keeps
 * a set of choice functions, given as whitespace- or comma-separated
 * bitstrings over the pairs in lexicographic order.
 */
export function check_domain(rule: string, m: number, members: string): string;

/**
 * Post class of a decisive coalition, e.g.
 * `{"n":3,"members":[[1,2],[2,3],[1,3],[1,2,3]]}`.
 */
export function classify_coalition(coalition_json: string): string;

/**
 * Probe fingerprint of the clone generated by one Boolean function,
 * given as its truth table, row `0…0` first (`"00010111"` is the median).
 */
export function fingerprint(truth_table: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly check_domain: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly classify_coalition: (a: number, b: number) => [number, number];
    readonly fingerprint: (a: number, b: number) => [number, number];
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
