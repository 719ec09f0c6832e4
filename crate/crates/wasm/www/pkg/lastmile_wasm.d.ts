/* tslint:disable */
/* eslint-disable */

export class Histogram {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly counts: Float64Array;
    readonly hi: number;
    readonly lo: number;
    readonly mean: number;
    readonly median: number;
    readonly p10: number;
    readonly p90: number;
    readonly std_dev: number;
}

export class PortfolioPath {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly aggregate: Float64Array;
    readonly families: Float64Array;
    readonly share: Float64Array;
}

export class Transition {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * -1 when the horizon ended first.
     */
    readonly converged_at: number;
    readonly k_ratio: Float64Array;
    readonly k_star: number;
    readonly s_star: number;
    readonly share: Float64Array;
}

export function calibration(gamma_lo: number, gamma_hi: number, n_draws: number, bins: number, seed: number): Histogram;

export function portfolio(rho: number, entry_mu: number, env_hazard: number, budget: number, periods: number, seed: number): PortfolioPath;

export function transition(alpha: number, gamma: number, r: number, delta_k: number, k0_ratio: number, horizon: number): Transition;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_histogram_free: (a: number, b: number) => void;
    readonly __wbg_portfoliopath_free: (a: number, b: number) => void;
    readonly __wbg_transition_free: (a: number, b: number) => void;
    readonly calibration: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly histogram_counts: (a: number) => [number, number];
    readonly histogram_hi: (a: number) => number;
    readonly histogram_lo: (a: number) => number;
    readonly histogram_mean: (a: number) => number;
    readonly histogram_median: (a: number) => number;
    readonly histogram_p10: (a: number) => number;
    readonly histogram_p90: (a: number) => number;
    readonly histogram_std_dev: (a: number) => number;
    readonly portfolio: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly portfoliopath_aggregate: (a: number) => [number, number];
    readonly portfoliopath_families: (a: number) => [number, number];
    readonly portfoliopath_share: (a: number) => [number, number];
    readonly transition: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly transition_converged_at: (a: number) => number;
    readonly transition_k_ratio: (a: number) => [number, number];
    readonly transition_k_star: (a: number) => number;
    readonly transition_s_star: (a: number) => number;
    readonly transition_share: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
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
