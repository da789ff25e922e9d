import type { SpecDoc } from "./types.js";

/** Maps spec dimension names onto a sketch's top-level variables.
 *
 * The sketch itself is never modified: the host assigns the bound globals,
 * then calls the exposed render entry point. */
export interface SketchBinding {
  /** URL (or path) of the sketch script. */
  sketch: string;
  /** Name of the render function the sketch exposes. */
  entry: string;
  /** spec dimension name -> sketch variable name */
  params: Record<string, string>;
  canvas: { width: number; height: number };
}

export class BindingError extends Error {}

export function parseBinding(doc: unknown): SketchBinding {
  if (typeof doc !== "object" || doc === null) {
    throw new BindingError("binding file must be a JSON object");
  }
  const raw = doc as Record<string, unknown>;
  if (typeof raw.sketch !== "string" || !raw.sketch) {
    throw new BindingError("binding needs a 'sketch' script path");
  }
  if (typeof raw.entry !== "string" || !raw.entry) {
    throw new BindingError("binding needs an 'entry' function name");
  }
  if (typeof raw.params !== "object" || raw.params === null) {
    throw new BindingError("binding needs a 'params' name map");
  }
  const canvas = raw.canvas as { width?: unknown; height?: unknown } | undefined;
  if (
    !canvas ||
    typeof canvas.width !== "number" ||
    typeof canvas.height !== "number" ||
    canvas.width <= 0 ||
    canvas.height <= 0
  ) {
    throw new BindingError("binding needs a positive 'canvas' {width, height}");
  }
  return {
    sketch: raw.sketch,
    entry: raw.entry,
    params: raw.params as Record<string, string>,
    canvas: { width: canvas.width, height: canvas.height },
  };
}

/** Every spec dimension must be bound before anything renders. */
export function validateBinding(binding: SketchBinding, spec: SpecDoc): void {
  const unbound = spec.dims
    .map((dim) => dim.name)
    .filter((name) => !(name in binding.params));
  if (unbound.length > 0) {
    throw new BindingError(`unbound spec dimensions: ${unbound.join(", ")}`);
  }
}
