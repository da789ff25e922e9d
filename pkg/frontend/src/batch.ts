import type { Api } from "./api.js";
import type { Renderer } from "./render.js";
import type { ParamVector, ProposalItem } from "./types.js";

export interface BatchTile {
  drawId: string;
  params: ParamVector;
  metadata: Record<string, string>;
  png: Uint8Array;
  /** 0..5, set only when the user touches the score widget. */
  score?: number;
}

/** Agent-tab workflow: request a batch, render every proposal, upload the
 * PNGs, collect scores, and submit feedback only for touched tiles.
 *
 * At most one batch is in flight; renders run sequentially so uploads stay
 * ordered. */
export class BatchSession {
  tiles: BatchTile[] = [];
  private busy = false;

  constructor(
    private readonly api: Api,
    private readonly renderer: Renderer,
  ) {}

  async generate(agent: string, count: number): Promise<BatchTile[]> {
    if (this.busy) throw new Error("a batch is already in flight");
    this.busy = true;
    try {
      const proposals: ProposalItem[] = await this.api.play(agent, count);
      const tiles: BatchTile[] = [];
      for (const proposal of proposals) {
        const png = await this.renderer.render(proposal.params, proposal.draw_id);
        await this.api.uploadImage(proposal.draw_id, png);
        tiles.push({
          drawId: proposal.draw_id,
          params: proposal.params,
          metadata: proposal.metadata,
          png,
        });
      }
      this.tiles = tiles;
      return tiles;
    } finally {
      this.busy = false;
    }
  }

  setScore(drawId: string, score: number): void {
    if (score < 0 || score > 5) throw new Error("scores are 0..5");
    const tile = this.tiles.find((t) => t.drawId === drawId);
    if (!tile) throw new Error(`no tile with draw id ${drawId}`);
    tile.score = score;
  }

  clearScore(drawId: string): void {
    const tile = this.tiles.find((t) => t.drawId === drawId);
    if (tile) delete tile.score;
  }

  /** Feedback goes out only for tiles the user actually scored; everything
   * else stays unrated on the server. Returns how many posts were made. */
  async submitScores(): Promise<number> {
    const touched = this.tiles.filter((t) => t.score !== undefined);
    for (const tile of touched) {
      await this.api.feedback(tile.drawId, tile.score!);
    }
    for (const tile of touched) {
      delete tile.score;
    }
    return touched.length;
  }

  timeWarp(agent: string, steps: number): Promise<void> {
    return this.api.timeWarp(agent, steps);
  }
}
