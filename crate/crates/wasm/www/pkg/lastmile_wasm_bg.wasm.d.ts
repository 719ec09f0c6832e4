/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_histogram_free: (a: number, b: number) => void;
export const __wbg_portfoliopath_free: (a: number, b: number) => void;
export const __wbg_transition_free: (a: number, b: number) => void;
export const calibration: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const histogram_counts: (a: number) => [number, number];
export const histogram_hi: (a: number) => number;
export const histogram_lo: (a: number) => number;
export const histogram_mean: (a: number) => number;
export const histogram_median: (a: number) => number;
export const histogram_p10: (a: number) => number;
export const histogram_p90: (a: number) => number;
export const histogram_std_dev: (a: number) => number;
export const portfolio: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const portfoliopath_aggregate: (a: number) => [number, number];
export const portfoliopath_families: (a: number) => [number, number];
export const portfoliopath_share: (a: number) => [number, number];
export const transition: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const transition_converged_at: (a: number) => number;
export const transition_k_ratio: (a: number) => [number, number];
export const transition_k_star: (a: number) => number;
export const transition_s_star: (a: number) => number;
export const transition_share: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
