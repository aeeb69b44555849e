import { forceLayout } from "./layout.js";
import type { ExplorerState } from "./state.js";
import { visiblePredicted } from "./state.js";
import type { TreatmentAnalysis } from "./types.js";

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Node radius grows with the drug's middle-vertex frequency F. */
export function nodeRadius(frequency: number, maxFrequency: number): number {
  const base = 12;
  if (maxFrequency <= 0) return base;
  return base + 14 * (frequency / maxFrequency);
}

export interface RenderedGraph {
  svg: string;
  edgeCount: number;
}

/**
 * Renders the analysis into an SVG string: directed edges labeled
 * effect/impact, deduced edges dashed, predicted overlay dotted, node size
 * by F. Pure function of (state, analysis) — no numbers are recomputed.
 */
export function renderAnalysis(state: ExplorerState): RenderedGraph {
  const analysis = state.analysis;
  if (!analysis) return { svg: emptyState(), edgeCount: 0 };
  const nodes = analysis.ranking.map((r) => r.cui);
  const labels = new Map(analysis.ranking.map((r) => [r.cui, r.label]));
  const frequencies = new Map(analysis.ranking.map((r) => [r.cui, r.frequency]));
  const maxF = Math.max(0, ...analysis.ranking.map((r) => r.frequency));
  const overlay = visiblePredicted(state);

  const layout = forceLayout(
    nodes,
    [
      ...analysis.interactions.map((e) => ({
        source: e.effectorDrugCui,
        target: e.affectdDrugCui,
      })),
      ...overlay.map((p) => ({ source: p.effectorDrugCui, target: p.affectdDrugCui })),
    ],
    analysis.treatment_id,
  );

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 600 400" class="ddi-graph">`,
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
      `markerWidth="6" markerHeight="6" orient="auto-start-reverse">` +
      `<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>`,
  ];
  for (const edge of analysis.interactions) {
    const a = layout.get(edge.effectorDrugCui);
    const b = layout.get(edge.affectdDrugCui);
    if (!a || !b) continue;
    const deduced = edge.provenance === "deduced";
    parts.push(
      `<line class="edge ${deduced ? "deduced" : "extensional"}" ` +
        `x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" ` +
        `x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}" ` +
        `marker-end="url(#arrow)"${deduced ? ' stroke-dasharray="6 3"' : ""}/>`,
      `<text class="edge-label" x="${((a.x + b.x) / 2).toFixed(1)}" ` +
        `y="${((a.y + b.y) / 2).toFixed(1)}">` +
        `${escapeXml(edge.effectLabel)}/${escapeXml(edge.impactLabel)}</text>`,
    );
  }
  for (const p of overlay) {
    const a = layout.get(p.effectorDrugCui);
    const b = layout.get(p.affectdDrugCui);
    if (!a || !b) continue;
    parts.push(
      `<line class="edge predicted" stroke-dasharray="2 4" ` +
        `x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" ` +
        `x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}"/>`,
      `<text class="edge-label predicted" x="${((a.x + b.x) / 2).toFixed(1)}" ` +
        `y="${((a.y + b.y) / 2).toFixed(1)}">conf ${p.confidence.toFixed(2)}</text>`,
    );
  }
  for (const cui of nodes) {
    const p = layout.get(cui)!;
    const r = nodeRadius(frequencies.get(cui) ?? 0, maxF);
    const removed = state.removed.includes(cui);
    parts.push(
      `<circle class="node${removed ? " removed" : ""}" cx="${p.x.toFixed(1)}" ` +
        `cy="${p.y.toFixed(1)}" r="${r.toFixed(1)}" data-cui="${cui}"/>`,
      `<text class="node-label" x="${p.x.toFixed(1)}" y="${(p.y - r - 4).toFixed(1)}">` +
        `${escapeXml(labels.get(cui) ?? cui)}</text>`,
    );
  }
  parts.push(legend(analysis, overlay.length > 0), "</svg>");
  return { svg: parts.join("\n"), edgeCount: analysis.interactions.length };
}

function legend(analysis: TreatmentAnalysis, hasPredicted: boolean): string {
  const effectKinds = [...new Set(analysis.interactions.map((e) => e.effectLabel))];
  const rows = [
    `<text x="10" y="20" class="legend">— documented DDI</text>`,
    `<text x="10" y="36" class="legend">- - deduced DDI</text>`,
  ];
  if (hasPredicted) rows.push(`<text x="10" y="52" class="legend">·· predicted DDI</text>`);
  rows.push(
    `<text x="10" y="${52 + (hasPredicted ? 16 : 0)}" class="legend">effects: ` +
      `${escapeXml(effectKinds.join(", "))}</text>`,
  );
  return `<g class="legend-box">${rows.join("")}</g>`;
}

function emptyState(): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 600 400" class="ddi-graph empty">` +
    `<text x="300" y="200" text-anchor="middle">Add drugs to analyze a treatment</text></svg>`
  );
}

/** Ranked drug list with withdrawal buttons; flags ties for the clinician. */
export function renderRanking(state: ExplorerState): string {
  const analysis = state.analysis;
  if (!analysis) return "<p class=\"empty\">No analysis yet.</p>";
  const rows = analysis.ranking.map((r) => {
    const reduction = analysis.reductions[r.cui];
    const reductionText = reduction === null || reduction === undefined
      ? "n/a"
      : `${reduction.toFixed(1)}%`;
    return (
      `<tr data-cui="${r.cui}"><td>${escapeXml(r.label)}</td><td>${r.frequency}` +
      `${r.tied ? " (tied)" : ""}</td><td>${reductionText}</td>` +
      `<td><button class="remove" data-cui="${r.cui}">withdraw</button></td></tr>`
    );
  });
  return (
    `<table class="ranking"><thead><tr><th>drug</th><th>F</th>` +
    `<th>reduction</th><th></th></tr></thead><tbody>${rows.join("")}</tbody></table>`
  );
}
