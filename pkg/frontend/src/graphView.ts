/** Read-only graph view: nodes with typed, coloured ports and their wires.
 *
 * Port colours are not invented here: they come from the /blocks registry
 * response, one colour per port type, so the view and the engine can never
 * disagree about what a colour means.
 */

import { BlockInfo, PortTypeName, SongDocument } from './protocol.js';

/** Colour per port type, extracted from the registry. Pure: same blocks in,
 * same mapping out. Throws if the registry is inconsistent. */
export function portColours(blocks: BlockInfo[]): Record<PortTypeName, string> {
  const mapping = {} as Record<PortTypeName, string>;
  for (const block of blocks) {
    for (const port of [...block.inputs, ...block.outputs]) {
      const existing = mapping[port.type];
      if (existing !== undefined && existing !== port.colour) {
        throw new Error(
          `registry assigns two colours to ${port.type}: ${existing} and ${port.colour}`,
        );
      }
      mapping[port.type] = port.colour;
    }
  }
  return mapping;
}

export interface NodeLayout {
  id: string;
  kind: string;
  column: number;
  row: number;
  x: number;
  y: number;
}

const COLUMN_WIDTH = 190;
const ROW_HEIGHT = 110;
export const NODE_WIDTH = 150;
export const NODE_HEIGHT = 78;

/** Layered layout: a node sits one column right of its deepest input. */
export function layoutNodes(song: SongDocument): NodeLayout[] {
  const depth = new Map<string, number>();
  const incoming = new Map<string, string[]>();
  for (const edge of song.edges) {
    const from = edge.from.split('.')[0];
    const to = edge.to.split('.')[0];
    const sources = incoming.get(to) ?? [];
    sources.push(from);
    incoming.set(to, sources);
  }
  const resolve = (id: string, seen: Set<string>): number => {
    const known = depth.get(id);
    if (known !== undefined) return known;
    if (seen.has(id)) return 0; // defensive: cycles cannot happen post-validation
    seen.add(id);
    const sources = incoming.get(id) ?? [];
    const d = sources.length
      ? 1 + Math.max(...sources.map((s) => resolve(s, seen)))
      : 0;
    depth.set(id, d);
    return d;
  };
  const rows = new Map<number, number>();
  return song.nodes.map((node) => {
    const column = resolve(node.id, new Set());
    const row = rows.get(column) ?? 0;
    rows.set(column, row + 1);
    return {
      id: node.id,
      kind: node.kind,
      column,
      row,
      x: 20 + column * COLUMN_WIDTH,
      y: 20 + row * ROW_HEIGHT,
    };
  });
}

function portPositions(
  layout: NodeLayout,
  count: number,
  side: 'left' | 'right',
): { x: number; y: number }[] {
  const x = side === 'left' ? layout.x : layout.x + NODE_WIDTH;
  const out: { x: number; y: number }[] = [];
  for (let i = 0; i < count; i++) {
    out.push({ x, y: layout.y + 24 + i * 14 });
  }
  return out;
}

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

/** Render the song graph into an <svg> element. */
export function renderGraph(
  svg: SVGSVGElement,
  song: SongDocument,
  blocks: BlockInfo[],
): void {
  svg.textContent = '';
  const byKind = new Map(blocks.map((b) => [b.kind, b]));
  const layouts = layoutNodes(song);

  const anchors = new Map<string, { x: number; y: number }>();
  for (const layout of layouts) {
    const info = byKind.get(layout.kind);
    if (!info) continue;
    const inputs = portPositions(layout, info.inputs.length, 'left');
    const outputs = portPositions(layout, info.outputs.length, 'right');
    info.inputs.forEach((port, i) =>
      anchors.set(`${layout.id}.${port.name}:in`, inputs[i]),
    );
    info.outputs.forEach((port, i) =>
      anchors.set(`${layout.id}.${port.name}:out`, outputs[i]),
    );
  }

  for (const edge of song.edges) {
    const from = anchors.get(`${edge.from}:out`);
    const to = anchors.get(`${edge.to}:in`);
    if (!from || !to) continue;
    const mid = (from.x + to.x) / 2;
    svg.appendChild(
      svgElement('path', {
        d: `M ${from.x} ${from.y} C ${mid} ${from.y}, ${mid} ${to.y}, ${to.x} ${to.y}`,
        class: 'edge',
      }),
    );
  }

  for (const layout of layouts) {
    const info = byKind.get(layout.kind);
    const group = svgElement('g', { class: 'node' });
    group.appendChild(
      svgElement('rect', {
        x: layout.x,
        y: layout.y,
        width: NODE_WIDTH,
        height: NODE_HEIGHT,
        rx: 6,
        class: 'node-box',
      }),
    );
    const title = svgElement('text', {
      x: layout.x + NODE_WIDTH / 2,
      y: layout.y + 14,
      class: 'node-title',
      'text-anchor': 'middle',
    });
    title.textContent = layout.id;
    group.appendChild(title);
    const subtitle = svgElement('text', {
      x: layout.x + NODE_WIDTH / 2,
      y: layout.y + 14,
      dy: 12,
      class: 'node-kind',
      'text-anchor': 'middle',
    });
    subtitle.textContent = layout.kind;
    group.appendChild(subtitle);
    if (info) {
      const inputs = portPositions(layout, info.inputs.length, 'left');
      const outputs = portPositions(layout, info.outputs.length, 'right');
      info.inputs.forEach((port, i) => {
        const circle = svgElement('circle', {
          cx: inputs[i].x,
          cy: inputs[i].y,
          r: 4.5,
          fill: port.colour,
          class: 'port',
        });
        const tip = svgElement('title', {});
        tip.textContent = `${port.name}: ${port.type}${port.required ? ' (required)' : ''}`;
        circle.appendChild(tip);
        group.appendChild(circle);
      });
      info.outputs.forEach((port, i) => {
        const circle = svgElement('circle', {
          cx: outputs[i].x,
          cy: outputs[i].y,
          r: 4.5,
          fill: port.colour,
          class: 'port',
        });
        const tip = svgElement('title', {});
        tip.textContent = `${port.name}: ${port.type}`;
        circle.appendChild(tip);
        group.appendChild(circle);
      });
    }
    svg.appendChild(group);
  }

  const maxX = Math.max(...layouts.map((l) => l.x + NODE_WIDTH), 400) + 20;
  const maxY = Math.max(...layouts.map((l) => l.y + NODE_HEIGHT), 200) + 20;
  svg.setAttribute('viewBox', `0 0 ${maxX} ${maxY}`);
}
