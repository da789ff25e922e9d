export type ParamValue = number | string;
export type ParamVector = Record<string, ParamValue>;

export interface FloatDimDoc {
  name: string;
  kind: "float";
  min: number;
  max: number;
}

export interface IntDimDoc {
  name: string;
  kind: "int";
  min: number;
  max: number;
}

export interface ChoiceDimDoc {
  name: string;
  kind: "choice";
  options: string[];
}

export type DimDoc = FloatDimDoc | IntDimDoc | ChoiceDimDoc;

export interface SpecDoc {
  dims: DimDoc[];
}

export interface ProposalItem {
  draw_id: string;
  params: ParamVector;
  metadata: Record<string, string>;
}

export interface DrawingRecord {
  id: string;
  created_at: string;
  params: ParamVector;
  score: number | null;
  agent: string;
  provenance: Record<string, string>;
  image_path: string | null;
}

export interface GalleryFilter {
  score_min?: number;
  score_max?: number;
  agent?: string;
  unrated_only?: boolean;
  since?: string;
  until?: string;
  sort?: "created_at" | "score";
  order?: "asc" | "desc";
  limit?: number;
  offset?: number;
}

export const AGENT_NAMES = ["random", "gaussian", "open_ended", "cmaes"] as const;
export type AgentName = (typeof AGENT_NAMES)[number];
