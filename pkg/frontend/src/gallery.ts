import type { Api } from "./api.js";
import type { DrawingRecord, GalleryFilter } from "./types.js";

/** Gallery-tab state: server-side filters plus a client-side multi-select
 * for bulk rating and deletion. Records always come fresh from the API. */
export class GalleryView {
  records: DrawingRecord[] = [];
  selected = new Set<string>();

  constructor(private readonly api: Api) {}

  async refresh(filter: GalleryFilter = {}): Promise<DrawingRecord[]> {
    this.records = await this.api.gallery(filter);
    const ids = new Set(this.records.map((r) => r.id));
    for (const id of [...this.selected]) {
      if (!ids.has(id)) this.selected.delete(id);
    }
    return this.records;
  }

  toggle(drawId: string): void {
    if (this.selected.has(drawId)) {
      this.selected.delete(drawId);
    } else {
      this.selected.add(drawId);
    }
  }

  selectAll(): void {
    this.selected = new Set(this.records.map((r) => r.id));
  }

  clearSelection(): void {
    this.selected.clear();
  }

  /** Rate every selected drawing; returns the number of feedback posts. */
  async bulkRate(score: number): Promise<number> {
    const ids = [...this.selected];
    for (const id of ids) {
      await this.api.feedback(id, score);
    }
    return ids.length;
  }

  async bulkDelete(): Promise<number> {
    const ids = [...this.selected];
    for (const id of ids) {
      await this.api.deleteDrawing(id);
    }
    this.selected.clear();
    return ids.length;
  }
}

/** Turn loose form inputs into a clean server-side filter. */
export function buildFilter(input: {
  scoreMin?: string;
  scoreMax?: string;
  agent?: string;
  unratedOnly?: boolean;
  sort?: string;
  order?: string;
}): GalleryFilter {
  const filter: GalleryFilter = {};
  if (input.scoreMin) filter.score_min = Number(input.scoreMin);
  if (input.scoreMax) filter.score_max = Number(input.scoreMax);
  if (input.agent) filter.agent = input.agent;
  if (input.unratedOnly) filter.unrated_only = true;
  if (input.sort === "score" || input.sort === "created_at") filter.sort = input.sort;
  if (input.order === "asc" || input.order === "desc") filter.order = input.order;
  return filter;
}
