/** Bootstrap: wire the HTTP endpoints, the session stream, the curve editor,
 * the graph view and the synthesizer into one page. */

import { CurveStore } from './curveModel.js';
import { CurveView } from './curveView.js';
import { portColours, renderGraph } from './graphView.js';
import {
  BlockInfo,
  CURVE_LABELS,
  CurveLabel,
  CurvesDocument,
  EditOp,
  SessionInfo,
  SongDocument,
} from './protocol.js';
import { SessionClient } from './session.js';
import { AudioContextLike, BarScheduler, PolySynth, PPQ } from './synth.js';

interface SongResponse {
  id: string;
  song: SongDocument;
  curves: CurvesDocument;
}

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function setStatus(text: string, kind: 'ok' | 'err' | 'info' = 'info'): void {
  const status = el<HTMLSpanElement>('status');
  status.textContent = text;
  status.className = kind;
}

async function getJson<T>(path: string): Promise<T> {
  const response = await fetch(path);
  if (!response.ok) throw new Error(`${path}: HTTP ${response.status}`);
  return (await response.json()) as T;
}

async function boot(): Promise<void> {
  setStatus('connecting…');
  const songs = await getJson<{ id: string; title: string }[]>('/songs');
  if (!songs.length) {
    setStatus('library is empty', 'err');
    return;
  }
  const params = new URLSearchParams(location.search);
  const songId = params.get('song') ?? songs[0].id;
  const [blocks, songDoc] = await Promise.all([
    getJson<BlockInfo[]>('/blocks'),
    getJson<SongResponse>(`/songs/${songId}`),
  ]);

  const createResponse = await fetch('/sessions', {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify({ song_id: songId }),
  });
  if (!createResponse.ok) {
    setStatus(`session refused: HTTP ${createResponse.status}`, 'err');
    return;
  }
  const session = (await createResponse.json()) as SessionInfo;
  el<HTMLHeadingElement>('title').textContent =
    `${session.title || songId} — ${session.length_bars} bars`;

  // Graph view: colours come from the registry, never invented locally.
  portColours(blocks); // validates one-colour-per-type
  const graphSvg = document.getElementById('graph');
  if (graphSvg instanceof SVGSVGElement) {
    renderGraph(graphSvg, songDoc.song, blocks);
  }

  // Sound: optional. No AudioContext means silent mode, playhead still moves.
  const AudioCtor =
    (window as { AudioContext?: new () => AudioContextLike }).AudioContext ?? null;
  const audio = AudioCtor ? new AudioCtor() : null;
  const synth = audio ? new PolySynth(audio) : null;
  const barTicks = session.time_sig[0] * ((PPQ * 4) / session.time_sig[1]);
  const scheduler = new BarScheduler(barTicks);
  if (!audio) setStatus('no audio available: silent mode', 'info');

  const store = new CurveStore(songDoc.curves);
  const views = new Map<CurveLabel, CurveView>();

  const wsUrl =
    (location.protocol === 'https:' ? 'wss://' : 'ws://') +
    location.host +
    `/sessions/${session.session_id}/stream`;

  const client = new SessionClient(
    () => new WebSocket(wsUrl) as unknown as import('./session.js').SocketLike,
    {
      onConnection: (state) => {
        if (state === 'open') setStatus('connected', 'ok');
        else if (state === 'connecting') setStatus('connecting…');
        else {
          setStatus(`connection ${state} — click to retry`, 'err');
          el<HTMLSpanElement>('status').onclick = () => client.retry();
        }
      },
      onBar: (msg) => {
        const t = msg.bar_index / Math.max(session.length_bars - 1, 1);
        for (const view of views.values()) view.setPlayhead(t);
        el<HTMLSpanElement>('bar').textContent =
          `bar ${msg.bar_index + 1}/${session.length_bars} · ${msg.bpm} BPM`;
        if (audio) scheduler.beginBar(audio.currentTime, msg.bar_index, msg.bpm);
      },
      onNoteOn: (msg) => {
        if (audio && synth) {
          synth.noteOn(scheduler.timeFor(msg.tick), msg.channel, msg.pitch, msg.velocity);
        }
      },
      onNoteOff: (msg) => {
        if (audio && synth) {
          synth.noteOff(scheduler.timeFor(msg.tick), msg.channel, msg.pitch);
        }
      },
      onTransport: (msg) => {
        el<HTMLSpanElement>('transport').textContent = msg.state;
        if (msg.state === 'stopped' && audio && synth) {
          synth.allOff(audio.currentTime + 0.1);
          scheduler.reset();
        }
      },
      onAck: (msg) => {
        store.onAck();
        redraw();
        if (typeof msg.effective_bar === 'number') {
          setStatus(`takes effect at bar ${msg.effective_bar + 1}`, 'ok');
        } else if (msg.saved) {
          setStatus(`saved to ${msg.saved}`, 'ok');
        }
      },
      onServerError: (msg) => {
        store.onError();
        redraw();
        setStatus(`${msg.code}: ${msg.message}`, 'err');
      },
    },
  );

  const delegate = {
    sendEdit: (label: CurveLabel, op: EditOp) => client.sendCurveEdit(label, op),
  };
  for (const label of CURVE_LABELS) {
    const canvas = el<HTMLCanvasElement>(`curve-${label}`);
    const view = new CurveView(canvas, label, store, delegate);
    views.set(label, view);
    view.draw();
  }
  const redraw = () => views.forEach((view) => view.draw());

  el<HTMLButtonElement>('play').onclick = () => client.play();
  el<HTMLButtonElement>('pause').onclick = () => client.pause();
  el<HTMLButtonElement>('stop').onclick = () => client.stop();
  el<HTMLButtonElement>('save').onclick = () => client.save();
}

boot().catch((err) => setStatus(String(err), 'err'));
