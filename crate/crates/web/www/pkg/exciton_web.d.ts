/* tslint:disable */
/* eslint-disable */

/**
 * Band energy over the Brillouin zone, with the photon line for reference.
 */
export function dispersion_curve(ea_ev: number, a_angstrom: number, mu_e_angstrom: number, theta_deg: number, steps: number): string;

/**
 * Far-field intensity, normalised to its value at arrival, for `span_ns`
 * after the signal reaches distance ρ.
 */
export function intensity_decay(ea_ev: number, a_angstrom: number, mu_e_angstrom: number, theta_deg: number, ka: number, span_ns: number, steps: number): string;

/**
 * Γ_k/Γ_at against ka ∈ (0, π] at fixed θ.
 */
export function rate_vs_ka(ea_ev: number, a_angstrom: number, mu_e_angstrom: number, theta_deg: number, mode: string, steps: number): string;

/**
 * Γ_k/Γ_at against θ ∈ [0°, 180°] at fixed ka, with the dark window.
 */
export function rate_vs_theta(ea_ev: number, a_angstrom: number, mu_e_angstrom: number, ka: number, mode: string, steps: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly dispersion_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly intensity_decay: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly rate_vs_ka: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly rate_vs_theta: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
