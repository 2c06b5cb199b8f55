/**
 * Squarified treemap layout (Bruls, Huizing, van Wijk). Rows are laid
 * along the shorter side of the remaining rectangle and closed as soon as
 * adding the next item would worsen the worst aspect ratio.
 */

import { TreemapNode } from "./api.js";

export interface Rect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface Tile {
  label: string;
  level: string;
  weight: number;
  depth: number;
  rect: Rect;
}

function worstAspect(row: number[], shortSide: number, scale: number): number {
  const total = row.reduce((a, b) => a + b, 0) * scale;
  const rowThickness = total / shortSide;
  let worst = 0;
  for (const weight of row) {
    const length = (weight * scale) / rowThickness;
    const ratio = Math.max(rowThickness / length, length / rowThickness);
    worst = Math.max(worst, ratio);
  }
  return worst;
}

function layoutRow(row: number[], scale: number, rect: Rect): { tiles: Rect[]; rest: Rect } {
  const total = row.reduce((a, b) => a + b, 0) * scale;
  const tiles: Rect[] = [];
  if (rect.width >= rect.height) {
    const thickness = total / rect.height;
    let y = rect.y;
    for (const weight of row) {
      const length = (weight * scale) / thickness;
      tiles.push({ x: rect.x, y, width: thickness, height: length });
      y += length;
    }
    return {
      tiles,
      rest: { x: rect.x + thickness, y: rect.y, width: rect.width - thickness, height: rect.height },
    };
  }
  const thickness = total / rect.width;
  let x = rect.x;
  for (const weight of row) {
    const length = (weight * scale) / thickness;
    tiles.push({ x, y: rect.y, width: length, height: thickness });
    x += length;
  }
  return {
    tiles,
    rest: { x: rect.x, y: rect.y + thickness, width: rect.width, height: rect.height - thickness },
  };
}

/**
 * Lays out `weights` inside `rect`; tile areas are exactly proportional
 * to the weights. Zero-weight items get zero-area tiles at the origin of
 * the remaining space. Returns one rect per input weight, in order.
 */
export function squarify(weights: number[], rect: Rect): Rect[] {
  const indexed = weights
    .map((weight, index) => ({ weight, index }))
    .filter((entry) => entry.weight > 0)
    .sort((a, b) => b.weight - a.weight || a.index - b.index);
  const out: Rect[] = weights.map(() => ({ x: rect.x, y: rect.y, width: 0, height: 0 }));
  const totalWeight = indexed.reduce((a, e) => a + e.weight, 0);
  if (totalWeight <= 0) {
    return out;
  }
  const scale = (rect.width * rect.height) / totalWeight;

  let remaining = { ...rect };
  let row: { weight: number; index: number }[] = [];
  const flushRow = () => {
    const placed = layoutRow(row.map((e) => e.weight), scale, remaining);
    row.forEach((entry, i) => {
      out[entry.index] = placed.tiles[i];
    });
    remaining = placed.rest;
    row = [];
  };

  for (const entry of indexed) {
    const shortSide = Math.min(remaining.width, remaining.height);
    if (row.length > 0) {
      const current = worstAspect(row.map((e) => e.weight), shortSide, scale);
      const extended = worstAspect([...row.map((e) => e.weight), entry.weight], shortSide, scale);
      if (extended > current) {
        flushRow();
      }
    }
    row.push(entry);
  }
  if (row.length > 0) {
    flushRow();
  }
  return out;
}

/**
 * Recursively lays out a weight hierarchy. Depth 0 is the root node;
 * every node (not just leaves) produces a tile so ancestors remain
 * clickable filter targets.
 */
export function layoutTreemap(node: TreemapNode, rect: Rect, depth = 0): Tile[] {
  const tiles: Tile[] = [{
    label: node.label,
    level: node.level,
    weight: node.weight,
    depth,
    rect,
  }];
  if (node.children.length === 0) {
    return tiles;
  }
  const childRects = squarify(node.children.map((c) => c.weight), rect);
  node.children.forEach((child, i) => {
    tiles.push(...layoutTreemap(child, childRects[i], depth + 1));
  });
  return tiles;
}

export function area(rect: Rect): number {
  return rect.width * rect.height;
}
