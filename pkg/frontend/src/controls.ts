import type { DimDoc, ParamValue, ParamVector, SpecDoc } from "./types.js";

/** One UI control per spec dimension: sliders for numbers, a dropdown for
 * choices. The control model is plain data so it can be tested headless. */
export interface SliderControl {
  kind: "slider";
  name: string;
  min: number;
  max: number;
  step: number;
  value: number;
}

export interface DropdownControl {
  kind: "dropdown";
  name: string;
  options: string[];
  value: string;
}

export type Control = SliderControl | DropdownControl;

export function controlForDim(dim: DimDoc): Control {
  if (dim.kind === "choice") {
    return { kind: "dropdown", name: dim.name, options: dim.options, value: dim.options[0]! };
  }
  const span = dim.max - dim.min;
  const step = dim.kind === "int" ? 1 : span > 0 ? span / 200 : 1;
  const mid = dim.kind === "int" ? Math.round((dim.min + dim.max) / 2) : dim.min + span / 2;
  return { kind: "slider", name: dim.name, min: dim.min, max: dim.max, step, value: mid };
}

export function buildControls(spec: SpecDoc): Control[] {
  return spec.dims.map(controlForDim);
}

export function controlValues(controls: Control[]): ParamVector {
  const out: ParamVector = {};
  for (const control of controls) {
    out[control.name] = control.value;
  }
  return out;
}

/** Push a parameter vector (e.g. a server-proposed random draw) into the
 * controls, clamping numbers into range. */
export function setControlValues(controls: Control[], params: ParamVector): void {
  for (const control of controls) {
    const value: ParamValue | undefined = params[control.name];
    if (value === undefined) continue;
    if (control.kind === "dropdown") {
      if (typeof value === "string" && control.options.includes(value)) {
        control.value = value;
      }
    } else if (typeof value === "number" && Number.isFinite(value)) {
      const clamped = Math.min(control.max, Math.max(control.min, value));
      control.value = control.step === 1 ? Math.round(clamped) : clamped;
    }
  }
}
