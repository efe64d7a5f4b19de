/** Client-side curve state with optimistic edits.
 *
 * The store keeps two layers: the last server-acknowledged points per curve,
 * and a FIFO of in-flight edits. What the UI renders is the acked state with
 * the in-flight edits applied; when the server acks an edit it is folded
 * into the base, and when the server rejects one it simply disappears from
 * the overlay (the rollback the protocol requires). Replies arrive on one
 * ordered channel, so FIFO pairing is sound.
 */

import { CURVE_LABELS, CurveLabel, CurvePoint, CurvesDocument, EditOp } from './protocol.js';

/** Minimum time gap between points, mirroring the server's collision rule. */
export const MIN_TIME_GAP = 1e-6;

function clamp01(x: number): number {
  return x < 0 ? 0 : x > 1 ? 1 : x;
}

function sortPoints(points: CurvePoint[]): CurvePoint[] {
  return [...points].sort((a, b) => a[0] - b[0]);
}

/** Apply one edit the way the server would; throws on invalid input. */
export function applyOp(points: CurvePoint[], op: EditOp): CurvePoint[] {
  if (op.kind === 'insert') {
    const [t, v] = op.point;
    if (points.some((p) => Math.abs(p[0] - t) <= MIN_TIME_GAP)) {
      throw new Error(`point already exists at t=${t}`);
    }
    return sortPoints([...points, [clamp01(t), clamp01(v)]]);
  }
  if (op.kind === 'move') {
    if (op.index < 0 || op.index >= points.length) {
      throw new Error(`no point at index ${op.index}`);
    }
    const [t, v] = op.point;
    if (
      points.some((p, i) => i !== op.index && Math.abs(p[0] - t) <= MIN_TIME_GAP)
    ) {
      throw new Error(`point already exists at t=${t}`);
    }
    const next = [...points];
    next[op.index] = [clamp01(t), clamp01(v)];
    return sortPoints(next);
  }
  if (op.index < 0 || op.index >= points.length) {
    throw new Error(`no point at index ${op.index}`);
  }
  if (points.length === 1) {
    throw new Error('cannot remove the last point');
  }
  return points.filter((_, i) => i !== op.index);
}

interface PendingEdit {
  label: CurveLabel;
  op: EditOp;
}

export class CurveStore {
  private acked: Record<CurveLabel, CurvePoint[]>;
  private pending: PendingEdit[] = [];

  constructor(doc: CurvesDocument) {
    this.acked = {
      energy: sortPoints(doc.energy),
      valence: sortPoints(doc.valence),
      complexity: sortPoints(doc.complexity),
    };
  }

  /** The state the UI should draw: acked plus in-flight edits. */
  current(label: CurveLabel): CurvePoint[] {
    let points = this.acked[label];
    for (const edit of this.pending) {
      if (edit.label === label) {
        try {
          points = applyOp(points, edit.op);
        } catch {
          // A stale in-flight edit no longer applies; the server will reject
          // it and onError will drop it. Render without it meanwhile.
        }
      }
    }
    return points;
  }

  ackedPoints(label: CurveLabel): CurvePoint[] {
    return this.acked[label];
  }

  hasPending(): boolean {
    return this.pending.length > 0;
  }

  /** Record an optimistic edit; returns the op to send to the server.
   * Throws (and records nothing) if the edit is locally invalid. */
  beginEdit(label: CurveLabel, op: EditOp): EditOp {
    applyOp(this.current(label), op); // validate against the rendered state
    this.pending.push({ label, op });
    return op;
  }

  /** Server acknowledged the oldest in-flight edit: fold it into the base. */
  onAck(): void {
    const edit = this.pending.shift();
    if (!edit) return;
    try {
      this.acked[edit.label] = applyOp(this.acked[edit.label], edit.op);
    } catch {
      // The server accepted an edit we cannot replay (should not happen with
      // an ordered channel); resync is the caller's escape hatch.
    }
  }

  /** Server rejected the oldest in-flight edit: roll it back. */
  onError(): void {
    this.pending.shift();
  }

  /** Replace everything with fresh server state (reconnect path). */
  resync(doc: CurvesDocument): void {
    for (const label of CURVE_LABELS) {
      this.acked[label] = sortPoints(doc[label]);
    }
    this.pending = [];
  }

  /** Clamp a dragged point's time between its neighbours (the local drag
   * rule: dragging never reorders points, it stops at the fence). */
  clampDragTime(label: CurveLabel, index: number, t: number): number {
    const points = this.current(label);
    const lo = index > 0 ? points[index - 1][0] + MIN_TIME_GAP * 2 : 0;
    const hi =
      index < points.length - 1 ? points[index + 1][0] - MIN_TIME_GAP * 2 : 1;
    return Math.min(Math.max(clamp01(t), lo), hi);
  }
}
