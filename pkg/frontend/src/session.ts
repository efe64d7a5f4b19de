/** Live session client: one message channel, ordered, typed.
 *
 * The socket is injected behind a small interface so tests can drive the
 * client with scripted traffic; the browser build passes a real WebSocket.
 */

import {
  AckMsg,
  BarBoundaryMsg,
  ClientMessage,
  CurveLabel,
  EditOp,
  ErrorMsg,
  NoteOffMsg,
  NoteOnMsg,
  ServerMessage,
  TransportChangedMsg,
  TransportStateName,
  isServerMessage,
} from './protocol.js';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((err: unknown) => void) | null;
  onopen: (() => void) | null;
}

export type ConnectionState = 'connecting' | 'open' | 'error' | 'closed';

export interface SessionHandlers {
  onNoteOn?(msg: NoteOnMsg): void;
  onNoteOff?(msg: NoteOffMsg): void;
  onBar?(msg: BarBoundaryMsg): void;
  onTransport?(msg: TransportChangedMsg): void;
  onAck?(msg: AckMsg): void;
  onServerError?(msg: ErrorMsg): void;
  onConnection?(state: ConnectionState): void;
}

export class SessionClient {
  connection: ConnectionState = 'connecting';
  transport: TransportStateName = 'stopped';
  playheadBar = -1;
  lastEffectiveBar: number | null = null;

  private socket: SocketLike;
  private readonly handlers: SessionHandlers;
  private readonly makeSocket: () => SocketLike;

  constructor(makeSocket: () => SocketLike, handlers: SessionHandlers = {}) {
    this.handlers = handlers;
    this.makeSocket = makeSocket;
    this.socket = this.attach(makeSocket());
  }

  /** Reconnect after a failure; state is resynced by the caller via HTTP. */
  retry(): void {
    this.setConnection('connecting');
    this.socket = this.attach(this.makeSocket());
  }

  private attach(socket: SocketLike): SocketLike {
    socket.onopen = () => this.setConnection('open');
    socket.onclose = () => this.setConnection('closed');
    socket.onerror = () => this.setConnection('error');
    socket.onmessage = (event) => {
      let parsed: unknown;
      try {
        parsed = JSON.parse(event.data);
      } catch {
        return;
      }
      if (isServerMessage(parsed)) this.dispatch(parsed);
    };
    return socket;
  }

  private setConnection(state: ConnectionState): void {
    this.connection = state;
    this.handlers.onConnection?.(state);
  }

  private dispatch(msg: ServerMessage): void {
    switch (msg.type) {
      case 'note_on':
        this.handlers.onNoteOn?.(msg);
        break;
      case 'note_off':
        this.handlers.onNoteOff?.(msg);
        break;
      case 'bar_boundary':
        // The playhead only ever advances within a pass; a smaller index
        // means the transport rewound (stop/seek), which is fine.
        this.playheadBar = msg.bar_index;
        this.handlers.onBar?.(msg);
        break;
      case 'transport_changed':
        this.transport = msg.state;
        this.handlers.onTransport?.(msg);
        break;
      case 'ack':
        if (typeof msg.effective_bar === 'number') {
          this.lastEffectiveBar = msg.effective_bar;
        }
        this.handlers.onAck?.(msg);
        break;
      case 'error':
        this.handlers.onServerError?.(msg);
        break;
    }
  }

  private send(msg: ClientMessage): void {
    this.socket.send(JSON.stringify(msg));
  }

  play(): void {
    this.send({ type: 'play' });
  }

  pause(): void {
    this.send({ type: 'pause' });
  }

  stop(): void {
    this.send({ type: 'stop' });
  }

  seek(bar: number): void {
    this.send({ type: 'seek', bar });
  }

  sendCurveEdit(curve: CurveLabel, op: EditOp): void {
    this.send({ type: 'curve_edit', curve, op });
  }

  save(): void {
    this.send({ type: 'save' });
  }

  close(): void {
    this.socket.close();
  }
}
