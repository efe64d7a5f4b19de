/** Canvas editor for one emotion curve: draggable points plus a playhead.
 *
 * Dragging shows the optimistic position; the move op goes to the server on
 * release. Times clamp between neighbouring points, so a drag can never
 * reorder the curve locally. Acks commit, errors roll back (the store owns
 * that logic; this file is only pixels and pointers).
 */

import { CurveStore } from './curveModel.js';
import { CurveLabel, CurvePoint, EditOp } from './protocol.js';

const COLOURS: Record<CurveLabel, string> = {
  energy: '#e0564f',
  valence: '#eab53b',
  complexity: '#5f7fe8',
};

const PAD = 10;
const HIT_RADIUS = 12;

export interface CurveViewDelegate {
  sendEdit(label: CurveLabel, op: EditOp): void;
}

interface DragState {
  index: number;
  point: CurvePoint;
}

export class CurveView {
  readonly label: CurveLabel;
  private readonly canvas: HTMLCanvasElement;
  private readonly store: CurveStore;
  private readonly delegate: CurveViewDelegate;
  private drag: DragState | null = null;
  private playheadT = -1;
  private statusText = '';

  constructor(
    canvas: HTMLCanvasElement,
    label: CurveLabel,
    store: CurveStore,
    delegate: CurveViewDelegate,
  ) {
    this.canvas = canvas;
    this.label = label;
    this.store = store;
    this.delegate = delegate;
    canvas.addEventListener('pointerdown', (e) => this.onDown(e));
    canvas.addEventListener('pointermove', (e) => this.onMove(e));
    canvas.addEventListener('pointerup', (e) => this.onUp(e));
    canvas.addEventListener('dblclick', (e) => this.onDouble(e));
    canvas.addEventListener('contextmenu', (e) => {
      e.preventDefault();
      this.onRemove(e);
    });
  }

  setPlayhead(t: number): void {
    this.playheadT = t;
    this.draw();
  }

  setStatus(text: string): void {
    this.statusText = text;
    this.draw();
  }

  private toCanvas(p: CurvePoint): [number, number] {
    const w = this.canvas.width - 2 * PAD;
    const h = this.canvas.height - 2 * PAD;
    return [PAD + p[0] * w, PAD + (1 - p[1]) * h];
  }

  private fromCanvas(x: number, y: number): CurvePoint {
    const w = this.canvas.width - 2 * PAD;
    const h = this.canvas.height - 2 * PAD;
    const t = (x - PAD) / w;
    const v = 1 - (y - PAD) / h;
    return [Math.min(1, Math.max(0, t)), Math.min(1, Math.max(0, v))];
  }

  private eventPoint(e: MouseEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    const scaleX = this.canvas.width / rect.width;
    const scaleY = this.canvas.height / rect.height;
    return [(e.clientX - rect.left) * scaleX, (e.clientY - rect.top) * scaleY];
  }

  private hitTest(x: number, y: number): number {
    const points = this.points();
    for (let i = 0; i < points.length; i++) {
      const [px, py] = this.toCanvas(points[i]);
      if (Math.hypot(px - x, py - y) <= HIT_RADIUS) return i;
    }
    return -1;
  }

  private points(): CurvePoint[] {
    if (this.drag) {
      const points = [...this.store.current(this.label)];
      points[this.drag.index] = this.drag.point;
      return points;
    }
    return this.store.current(this.label);
  }

  private onDown(e: PointerEvent): void {
    const [x, y] = this.eventPoint(e);
    const index = this.hitTest(x, y);
    if (index >= 0) {
      this.canvas.setPointerCapture(e.pointerId);
      this.drag = { index, point: this.store.current(this.label)[index] };
    }
  }

  private onMove(e: PointerEvent): void {
    if (!this.drag) return;
    const [x, y] = this.eventPoint(e);
    const [t, v] = this.fromCanvas(x, y);
    const clamped = this.store.clampDragTime(this.label, this.drag.index, t);
    this.drag = { index: this.drag.index, point: [clamped, v] };
    this.draw();
  }

  private onUp(e: PointerEvent): void {
    if (!this.drag) return;
    const { index, point } = this.drag;
    this.drag = null;
    try {
      const op = this.store.beginEdit(this.label, { kind: 'move', index, point });
      this.delegate.sendEdit(this.label, op);
    } catch {
      // Invalid locally (e.g. time collision): just drop the drag.
    }
    this.draw();
  }

  private onDouble(e: MouseEvent): void {
    const [x, y] = this.eventPoint(e);
    if (this.hitTest(x, y) >= 0) return;
    const point = this.fromCanvas(x, y);
    try {
      const op = this.store.beginEdit(this.label, { kind: 'insert', point });
      this.delegate.sendEdit(this.label, op);
    } catch {
      return;
    }
    this.draw();
  }

  private onRemove(e: MouseEvent): void {
    const [x, y] = this.eventPoint(e);
    const index = this.hitTest(x, y);
    if (index < 0) return;
    try {
      const op = this.store.beginEdit(this.label, { kind: 'remove', index });
      this.delegate.sendEdit(this.label, op);
    } catch {
      return;
    }
    this.draw();
  }

  draw(): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = '#14161c';
    ctx.fillRect(0, 0, width, height);

    const points = this.points();
    const colour = COLOURS[this.label];

    // Hold-outside-range semantics: flat to the edges.
    ctx.strokeStyle = colour;
    ctx.lineWidth = 2;
    ctx.beginPath();
    const first = this.toCanvas([0, points[0][1]]);
    ctx.moveTo(first[0], first[1]);
    for (const p of points) {
      const [x, y] = this.toCanvas(p);
      ctx.lineTo(x, y);
    }
    const last = this.toCanvas([1, points[points.length - 1][1]]);
    ctx.lineTo(last[0], last[1]);
    ctx.stroke();

    for (const p of points) {
      const [x, y] = this.toCanvas(p);
      ctx.fillStyle = colour;
      ctx.beginPath();
      ctx.arc(x, y, 5, 0, Math.PI * 2);
      ctx.fill();
    }

    if (this.playheadT >= 0) {
      const [x] = this.toCanvas([this.playheadT, 0]);
      ctx.strokeStyle = '#e8e8e8';
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.moveTo(x, 0);
      ctx.lineTo(x, height);
      ctx.stroke();
    }

    ctx.fillStyle = '#b9bfcc';
    ctx.font = '12px system-ui, sans-serif';
    ctx.fillText(this.label, 8, 16);
    if (this.statusText) {
      ctx.textAlign = 'right';
      ctx.fillText(this.statusText, width - 8, 16);
      ctx.textAlign = 'left';
    }
  }
}
