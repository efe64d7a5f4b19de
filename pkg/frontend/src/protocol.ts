/** Wire types for the dynsong session protocol.
 *
 * Every message is a JSON object tagged by "type". Server to client:
 * note_on, note_off, bar_boundary, transport_changed, ack, error.
 * Client to server: play, pause, stop, seek, curve_edit, save.
 */

export type CurveLabel = 'energy' | 'valence' | 'complexity';
export const CURVE_LABELS: CurveLabel[] = ['energy', 'valence', 'complexity'];

export type PortTypeName = 'Chords' | 'Notes' | 'Rhythm' | 'Param';

/** [time, value], both normalized to [0, 1]. */
export type CurvePoint = [number, number];

export interface EmotionSample {
  energy: number;
  valence: number;
  complexity: number;
}

// -- server -> client ---------------------------------------------------------

export interface NoteOnMsg {
  type: 'note_on';
  tick: number;
  channel: number;
  pitch: number;
  velocity: number;
}

export interface NoteOffMsg {
  type: 'note_off';
  tick: number;
  channel: number;
  pitch: number;
}

export interface BarBoundaryMsg {
  type: 'bar_boundary';
  bar_index: number;
  emotion: EmotionSample;
  bpm: number;
}

export type TransportStateName = 'stopped' | 'playing' | 'paused';

export interface TransportChangedMsg {
  type: 'transport_changed';
  state: TransportStateName;
}

export interface AckMsg {
  type: 'ack';
  effective_bar?: number;
  saved?: string;
}

export interface ErrorMsg {
  type: 'error';
  code: string;
  message: string;
}

export type ServerMessage =
  | NoteOnMsg
  | NoteOffMsg
  | BarBoundaryMsg
  | TransportChangedMsg
  | AckMsg
  | ErrorMsg;

// -- client -> server ---------------------------------------------------------

export type EditOp =
  | { kind: 'insert'; point: CurvePoint }
  | { kind: 'move'; index: number; point: CurvePoint }
  | { kind: 'remove'; index: number };

export type ClientMessage =
  | { type: 'play' }
  | { type: 'pause' }
  | { type: 'stop' }
  | { type: 'seek'; bar: number }
  | { type: 'curve_edit'; curve: CurveLabel; op: EditOp }
  | { type: 'save' };

// -- HTTP payloads -------------------------------------------------------------

export interface PortInfo {
  name: string;
  type: PortTypeName;
  colour: string;
  required: boolean;
}

export interface BlockInfo {
  kind: string;
  description: string;
  sink: boolean;
  inputs: PortInfo[];
  outputs: PortInfo[];
  params: Record<string, { kind: string; default: unknown }>;
}

export interface SongDocument {
  schema_version: number;
  title: string;
  length_bars: number;
  time_sig: [number, number];
  master_seed: number;
  nodes: { id: string; kind: string; params: Record<string, unknown> }[];
  edges: { from: string; to: string }[];
}

export type CurvesDocument = Record<CurveLabel, CurvePoint[]>;

export interface SessionInfo {
  session_id: string;
  state: TransportStateName;
  length_bars: number;
  time_sig: [number, number];
  title: string;
}

export function isServerMessage(value: unknown): value is ServerMessage {
  if (typeof value !== 'object' || value === null) return false;
  const type = (value as { type?: unknown }).type;
  return (
    type === 'note_on' ||
    type === 'note_off' ||
    type === 'bar_boundary' ||
    type === 'transport_changed' ||
    type === 'ack' ||
    type === 'error'
  );
}
