/**
 * Cluster View: squarified treemap of the computing-unit hierarchy, tile
 * area proportional to vertex count. Clicking a tile toggles the unit in
 * or out of the filter; exclusion closes downward on the server side.
 */

import { TreeResponse } from "../api.js";
import { layoutTreemap, Tile } from "../squarify.js";
import { Store } from "../state.js";
import { h, VNode } from "../vdom.js";

const WIDTH = 360;
const HEIGHT = 240;

function isExcluded(tile: Tile, tree: TreeResponse, excluded: ReadonlySet<string>): boolean {
  if (excluded.has(tile.label)) {
    return true;
  }
  // A worker or host is hidden when any ancestor label is excluded.
  for (const row of tree.workers) {
    if (row.worker === tile.label) {
      return excluded.has(row.host) || excluded.has(row.rack);
    }
    if (row.host === tile.label) {
      return excluded.has(row.rack);
    }
  }
  return false;
}

export function renderClusterView(store: Store, tree: TreeResponse): VNode {
  const state = store.state;
  const colorOf = new Map(tree.workers.map((w) => [w.worker, w.color]));
  const tiles = layoutTreemap(tree.treemap, { x: 0, y: 0, width: WIDTH, height: HEIGHT });

  const rects: VNode[] = [];
  for (const tile of tiles) {
    if (tile.depth === 0 || tile.weight === 0) {
      continue;
    }
    const excluded = isExcluded(tile, tree, state.excluded);
    const fill = tile.level === "worker"
      ? colorOf.get(tile.label) ?? "#999999"
      : "none";
    rects.push(h("rect", {
      class: `tile tile-${tile.level}${excluded ? " excluded" : ""}`,
      "data-label": tile.label,
      "data-weight": String(tile.weight),
      x: tile.rect.x.toFixed(2),
      y: tile.rect.y.toFixed(2),
      width: tile.rect.width.toFixed(2),
      height: tile.rect.height.toFixed(2),
      fill,
      "fill-opacity": excluded ? "0.15" : "0.85",
      stroke: "#333333",
      "stroke-width": tile.level === "worker" ? "0.5" : "1.5",
    }, [
      h("title", {}, [`${tile.label}: ${tile.weight} vertices`]),
    ], {
      click: () => store.toggleExcluded(tile.label),
    }));
  }

  return h("section", {
    class: "cluster-view",
    "data-state": store.sharedTuple(),
  }, [
    h("h2", {}, ["Cluster"]),
    h("svg", {
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      width: String(WIDTH),
      height: String(HEIGHT),
    }, rects),
  ]);
}
