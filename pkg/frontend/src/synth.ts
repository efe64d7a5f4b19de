/** Polyphonic WebAudio playback of the note stream.
 *
 * Events for a bar arrive in one burst at the bar boundary; the scheduler
 * anchors each bar on the audio clock and spreads its notes at
 * tick * 60 / (bpm * PPQ) seconds. When no AudioContext is available the
 * client stays in silent mode: playback state still advances, nothing
 * sounds.
 */

export const PPQ = 480;
export const MAX_VOICES = 16;

/** Seconds per tick at a given tempo. */
export function secondsPerTick(bpm: number, ppq: number = PPQ): number {
  return 60 / (bpm * ppq);
}

export function midiToHz(pitch: number): number {
  return 440 * Math.pow(2, (pitch - 69) / 12);
}

// Structural slices of the WebAudio API, so tests can inject a fake.
export interface GainLike {
  gain: {
    value: number;
    setValueAtTime(value: number, time: number): void;
    linearRampToValueAtTime(value: number, time: number): void;
  };
  connect(target: unknown): void;
  disconnect(): void;
}

export interface OscillatorLike {
  type: string;
  frequency: { value: number };
  connect(target: unknown): void;
  start(when: number): void;
  stop(when: number): void;
}

export interface AudioContextLike {
  currentTime: number;
  destination: unknown;
  createGain(): GainLike;
  createOscillator(): OscillatorLike;
}

interface Voice {
  key: string;
  startedAt: number;
  osc: OscillatorLike;
  gain: GainLike;
  released: boolean;
}

const CHANNEL_WAVEFORMS = ['triangle', 'square', 'sawtooth', 'sine'];
const ATTACK = 0.01;
const RELEASE = 0.08;

/** Fixed-size voice pool: oldest voice is stolen when the pool is full. */
export class PolySynth {
  readonly maxVoices: number;
  private readonly ctx: AudioContextLike;
  private voices: Voice[] = [];

  constructor(ctx: AudioContextLike, maxVoices: number = MAX_VOICES) {
    this.ctx = ctx;
    this.maxVoices = maxVoices;
  }

  activeVoices(): number {
    return this.voices.length;
  }

  noteOn(time: number, channel: number, pitch: number, velocity: number): void {
    if (this.voices.length >= this.maxVoices) {
      const oldest = this.voices.reduce((a, b) => (a.startedAt <= b.startedAt ? a : b));
      this.release(oldest, time);
    }
    const osc = this.ctx.createOscillator();
    osc.type = CHANNEL_WAVEFORMS[channel % CHANNEL_WAVEFORMS.length];
    osc.frequency.value = midiToHz(pitch);
    const gain = this.ctx.createGain();
    const level = (velocity / 127) * 0.25;
    gain.gain.setValueAtTime(0, time);
    gain.gain.linearRampToValueAtTime(level, time + ATTACK);
    osc.connect(gain);
    gain.connect(this.ctx.destination);
    osc.start(time);
    this.voices.push({
      key: `${channel}:${pitch}`,
      startedAt: time,
      osc,
      gain,
      released: false,
    });
  }

  noteOff(time: number, channel: number, pitch: number): void {
    const key = `${channel}:${pitch}`;
    const voice = this.voices.find((v) => v.key === key && !v.released);
    if (voice) this.release(voice, time);
  }

  allOff(time: number): void {
    for (const voice of [...this.voices]) this.release(voice, time);
  }

  private release(voice: Voice, time: number): void {
    voice.released = true;
    voice.gain.gain.linearRampToValueAtTime(0, time + RELEASE);
    voice.osc.stop(time + RELEASE);
    this.voices = this.voices.filter((v) => v !== voice);
  }
}

/** Maps stream ticks onto the audio clock, one bar at a time. */
export class BarScheduler {
  private readonly barTicks: number;
  private readonly latency: number;
  private barStartTick = 0;
  private barStartTime = 0;
  private barSeconds = 0;
  private started = false;

  constructor(barTicks: number, latency = 0.08) {
    this.barTicks = barTicks;
    this.latency = latency;
  }

  /** Anchor a new bar; returns its audio-clock start time. */
  beginBar(now: number, barIndex: number, bpm: number): number {
    const tickSeconds = secondsPerTick(bpm);
    const expected = this.barStartTime + this.barSeconds;
    this.barStartTime =
      this.started && expected > now ? expected : now + this.latency;
    this.barStartTick = barIndex * this.barTicks;
    this.barSeconds = this.barTicks * tickSeconds;
    this.started = true;
    this.tickSeconds = tickSeconds;
    return this.barStartTime;
  }

  private tickSeconds = secondsPerTick(115);

  /** Audio-clock time for an absolute stream tick within the current bar. */
  timeFor(tick: number): number {
    return this.barStartTime + (tick - this.barStartTick) * this.tickSeconds;
  }

  reset(): void {
    this.started = false;
    this.barStartTime = 0;
    this.barSeconds = 0;
    this.barStartTick = 0;
  }
}
