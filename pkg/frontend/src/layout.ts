/** Deterministic force-directed layout: same treatment id, same picture. */

export interface Point {
  x: number;
  y: number;
}

/** mulberry32 PRNG: tiny, fast, and fully determined by its 32-bit seed. */
export function seededRandom(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function hashString(text: string): number {
  let h = 2166136261;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return h >>> 0;
}

export interface LayoutEdge {
  source: string;
  target: string;
}

/**
 * Seeded spring layout: random initial placement, then a fixed number of
 * repulsion/attraction sweeps. No randomness after initialization, so the
 * result is a pure function of (nodes, edges, seed key).
 */
export function forceLayout(
  nodes: string[],
  edges: LayoutEdge[],
  seedKey: string,
  width = 600,
  height = 400,
  iterations = 120,
): Map<string, Point> {
  const rand = seededRandom(hashString(seedKey));
  const ordered = [...nodes].sort();
  const positions = new Map<string, Point>();
  for (const node of ordered) {
    positions.set(node, {
      x: width * (0.1 + 0.8 * rand()),
      y: height * (0.1 + 0.8 * rand()),
    });
  }
  const k = Math.sqrt((width * height) / Math.max(1, ordered.length));
  for (let step = 0; step < iterations; step++) {
    const temperature = (0.1 * width * (iterations - step)) / iterations;
    const displacement = new Map<string, Point>(
      ordered.map((n) => [n, { x: 0, y: 0 }]),
    );
    for (let i = 0; i < ordered.length; i++) {
      for (let j = i + 1; j < ordered.length; j++) {
        const a = positions.get(ordered[i])!;
        const b = positions.get(ordered[j])!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const dist = Math.max(0.01, Math.hypot(dx, dy));
        const force = (k * k) / dist;
        const da = displacement.get(ordered[i])!;
        const db = displacement.get(ordered[j])!;
        da.x += (dx / dist) * force;
        da.y += (dy / dist) * force;
        db.x -= (dx / dist) * force;
        db.y -= (dy / dist) * force;
      }
    }
    for (const edge of edges) {
      const a = positions.get(edge.source);
      const b = positions.get(edge.target);
      if (!a || !b) continue;
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const dist = Math.max(0.01, Math.hypot(dx, dy));
      const force = (dist * dist) / k;
      const da = displacement.get(edge.source)!;
      const db = displacement.get(edge.target)!;
      da.x -= (dx / dist) * force;
      da.y -= (dy / dist) * force;
      db.x += (dx / dist) * force;
      db.y += (dy / dist) * force;
    }
    for (const node of ordered) {
      const p = positions.get(node)!;
      const d = displacement.get(node)!;
      const len = Math.max(0.01, Math.hypot(d.x, d.y));
      p.x += (d.x / len) * Math.min(len, temperature);
      p.y += (d.y / len) * Math.min(len, temperature);
      p.x = Math.min(width - 20, Math.max(20, p.x));
      p.y = Math.min(height - 20, Math.max(20, p.y));
    }
  }
  return positions;
}
