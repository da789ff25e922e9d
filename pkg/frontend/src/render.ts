import type { SketchBinding } from "./binding.js";
import type { ParamVector } from "./types.js";
import { rngForDrawing, type Rng } from "./seeded.js";

/** The contract a sketch script fulfills: it declares its parameters as
 * top-level vars and exposes one render function with this signature. */
export type SketchRenderFn = (
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  rnd: Rng,
) => void;

export interface SketchHandle {
  render: SketchRenderFn;
  /** Assign one of the sketch's top-level variables. */
  set(name: string, value: unknown): void;
  /** Read one of the sketch's top-level variables. */
  get(name: string): unknown;
}

/** Anything that can turn (params, drawId) into PNG bytes. The browser
 * implementation drives a real canvas; tests substitute a stub. */
export interface Renderer {
  render(params: ParamVector, drawId: string): Promise<Uint8Array>;
}

/** Evaluate a sketch script once, unmodified, and hand back its render
 * entry plus variable accessors.
 *
 * The script runs inside one function scope; the returned accessors use a
 * direct eval in that same scope, so assignments reach the very variables
 * the sketch's render function closes over. */
export function loadSketch(source: string, entry: string): SketchHandle {
  // host locals carry a __ prefix so hoisted sketch declarations (e.g. a
  // top-level `function render`) cannot collide with them
  const boot = new Function(
    "__source",
    "__entry",
    `eval(__source);
     var __render = eval(__entry);
     if (typeof __render !== "function") {
       throw new Error("sketch does not expose a render function named '" + __entry + "'");
     }
     return {
       render: __render,
       set: (__name, __value) => { eval(__name + " = __value"); },
       get: (__name) => eval(__name),
     };`,
  );
  return boot(source, entry) as SketchHandle;
}

/** Assign bound spec values onto the sketch's variables. */
export function applyParams(
  binding: SketchBinding,
  handle: SketchHandle,
  params: ParamVector,
): void {
  for (const [specName, sketchVar] of Object.entries(binding.params)) {
    if (specName in params) {
      handle.set(sketchVar, params[specName]);
    }
  }
}

/** Run one deterministic render pass against a 2D context. */
export function renderToContext(
  handle: SketchHandle,
  binding: SketchBinding,
  params: ParamVector,
  drawId: string,
  ctx: CanvasRenderingContext2D,
): void {
  applyParams(binding, handle, params);
  handle.render(ctx, binding.canvas.width, binding.canvas.height, rngForDrawing(drawId));
}

/** Browser renderer: draws on a (typically offscreen) canvas and captures
 * the PNG bytes for upload. */
export class CanvasRenderer implements Renderer {
  constructor(
    private readonly handle: SketchHandle,
    private readonly binding: SketchBinding,
    private readonly canvas: HTMLCanvasElement,
  ) {
    canvas.width = binding.canvas.width;
    canvas.height = binding.canvas.height;
  }

  async render(params: ParamVector, drawId: string): Promise<Uint8Array> {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas context unavailable");
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    renderToContext(this.handle, this.binding, params, drawId, ctx);
    const blob = await new Promise<Blob>((resolve, reject) => {
      this.canvas.toBlob(
        (b) => (b ? resolve(b) : reject(new Error("canvas capture failed"))),
        "image/png",
      );
    });
    return new Uint8Array(await blob.arrayBuffer());
  }
}
