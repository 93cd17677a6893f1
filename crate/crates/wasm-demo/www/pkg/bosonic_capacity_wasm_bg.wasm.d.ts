/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const capacity_curves: (a: number, b: number, c: number) => [number, number, number, number];
export const pie_se: (a: number, b: number, c: number) => [number, number, number, number];
export const single_mode_landscape: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
