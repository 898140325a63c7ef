// API payload shapes mirrored from the engine's JSON serialization.

export interface ElementRefPayload {
  view_id: string;
  element_id: string;
}

export interface PanelPayload {
  x: number;
  y: number;
  w: number;
  h: number;
  pinned: boolean;
  kind: 'view' | 'relationship_view' | 'document';
}

export interface BiclusterPayload {
  kind: 'bicluster';
  bicluster_id: string;
  view_a: string;
  view_b: string;
  elements_a: string[];
  elements_b: string[];
}

export interface ChainPayload {
  kind: 'chain';
  chain_id: string;
  sequence: string[];
  links: BiclusterPayload[];
  entity_sets: Record<string, string[]>;
  scores: number[];
}

export type RelationshipPayload = BiclusterPayload | ChainPayload;

export interface BarPayload {
  view_id: string;
  count: number;
}

export interface LayoutPayload {
  coordinates: Record<string, [number, number]>;
  radii: Record<string, number>;
  bar_summaries: Record<string, BarPayload[]>;
  bar_reference_max: number;
}

export type GlyphState = 'normal' | 'focused' | 'selected' | 'marked';
export type DisplayMode = 'circle' | 'summary';

export interface RelationshipViewPayload {
  rv_id: string;
  level: 'bi_group' | 'multi_group';
  source_views: string[];
  threshold: number | null;
  relationships: RelationshipPayload[];
  layout: LayoutPayload;
  display_mode_default: DisplayMode;
  display_modes: Record<string, DisplayMode>;
  states: Record<string, GlyphState>;
  diagnostic: string | null;
}

export interface DocumentPanelPayload {
  panel_id: string;
  doc_id: string;
  title: string;
  text: string;
  rv_id: string;
  relationship_id: string;
  highlights: { view_id: string; element_id: string; start: number; end: number; snippet: string }[];
}

export interface WorkspaceSnapshot {
  dataset_id: string;
  seq: number;
  panels: Record<string, PanelPayload>;
  relationship_views: Record<string, RelationshipViewPayload>;
  manual_links: [ElementRefPayload, ElementRefPayload][];
  document_panels: DocumentPanelPayload[];
}

export interface ViewElementPayload {
  element_id: string;
  label: string;
  attrs: Record<string, string | number>;
}

export interface ViewPayload {
  view_id: string;
  view_type: 'graph' | 'map' | 'list' | 'document' | 'other';
  label: string;
  insertion_index: number;
  elements: ViewElementPayload[];
}

export interface LinkItemPayload extends ElementRefPayload {
  kind: 'automatic' | 'manual';
}

export interface RelatedRelationshipPayload {
  rv_id: string;
  relationship_id: string;
  kind: string;
}

export interface LinkSetPayload {
  origin: Record<string, string>;
  same_view_elements: LinkItemPayload[];
  cross_view_elements: LinkItemPayload[];
  related_relationships: RelatedRelationshipPayload[];
}

export type SearchOrigin =
  | { view_id: string; element_id: string }
  | { rv_id: string; relationship_id: string };

export function relationshipId(rel: RelationshipPayload): string {
  return rel.kind === 'chain' ? rel.chain_id : rel.bicluster_id;
}

export function memberRefs(rel: RelationshipPayload): ElementRefPayload[] {
  if (rel.kind === 'chain') {
    return Object.entries(rel.entity_sets).flatMap(([view, ids]) =>
      ids.map((element_id) => ({ view_id: view, element_id })),
    );
  }
  return [
    ...rel.elements_a.map((element_id) => ({ view_id: rel.view_a, element_id })),
    ...rel.elements_b.map((element_id) => ({ view_id: rel.view_b, element_id })),
  ];
}
