import { describe, expect, it } from 'vitest';

import {
  AudioContextLike,
  BarScheduler,
  GainLike,
  OscillatorLike,
  PolySynth,
  midiToHz,
  secondsPerTick,
} from '../src/synth.js';

class FakeGain implements GainLike {
  ramps: [number, number][] = [];
  gain = {
    value: 1,
    setValueAtTime: (value: number, time: number) => {
      this.ramps.push([value, time]);
    },
    linearRampToValueAtTime: (value: number, time: number) => {
      this.ramps.push([value, time]);
    },
  };
  connect(): void {}
  disconnect(): void {}
}

class FakeOscillator implements OscillatorLike {
  type = 'sine';
  frequency = { value: 0 };
  startedAt: number | null = null;
  stoppedAt: number | null = null;
  connect(): void {}
  start(when: number): void {
    this.startedAt = when;
  }
  stop(when: number): void {
    this.stoppedAt = when;
  }
}

class FakeAudio implements AudioContextLike {
  currentTime = 0;
  destination = {};
  oscillators: FakeOscillator[] = [];
  gains: FakeGain[] = [];
  createGain(): GainLike {
    const g = new FakeGain();
    this.gains.push(g);
    return g;
  }
  createOscillator(): OscillatorLike {
    const o = new FakeOscillator();
    this.oscillators.push(o);
    return o;
  }
}

describe('tick math', () => {
  it('seconds per tick follows tempo', () => {
    expect(secondsPerTick(120)).toBeCloseTo(60 / (120 * 480));
    expect(secondsPerTick(60)).toBeCloseTo(2 * secondsPerTick(120));
  });

  it('midi to frequency hits the anchors', () => {
    expect(midiToHz(69)).toBeCloseTo(440);
    expect(midiToHz(57)).toBeCloseTo(220);
    expect(midiToHz(60)).toBeCloseTo(261.626, 2);
  });
});

describe('PolySynth', () => {
  it('holds at least 8 simultaneous voices', () => {
    const audio = new FakeAudio();
    const synth = new PolySynth(audio);
    for (let i = 0; i < 8; i++) synth.noteOn(0, 0, 60 + i, 100);
    expect(synth.activeVoices()).toBe(8);
    expect(synth.maxVoices).toBeGreaterThanOrEqual(8);
  });

  it('allocates a voice on note_on and releases it on note_off', () => {
    const audio = new FakeAudio();
    const synth = new PolySynth(audio);
    synth.noteOn(1.0, 0, 60, 100);
    expect(audio.oscillators).toHaveLength(1);
    expect(audio.oscillators[0].frequency.value).toBeCloseTo(midiToHz(60));
    expect(audio.oscillators[0].startedAt).toBe(1.0);
    synth.noteOff(2.0, 0, 60);
    expect(synth.activeVoices()).toBe(0);
    expect(audio.oscillators[0].stoppedAt).toBeGreaterThan(2.0);
  });

  it('steals the oldest voice when the pool is full', () => {
    const audio = new FakeAudio();
    const synth = new PolySynth(audio, 4);
    for (let i = 0; i < 4; i++) synth.noteOn(i * 0.1, 0, 60 + i, 100);
    synth.noteOn(1.0, 0, 72, 100);
    expect(synth.activeVoices()).toBe(4);
    expect(audio.oscillators[0].stoppedAt).not.toBeNull();
  });

  it('distinguishes channels for note_off', () => {
    const audio = new FakeAudio();
    const synth = new PolySynth(audio);
    synth.noteOn(0, 0, 60, 90);
    synth.noteOn(0, 1, 60, 90);
    synth.noteOff(1, 1, 60);
    expect(synth.activeVoices()).toBe(1);
  });

  it('allOff silences everything', () => {
    const audio = new FakeAudio();
    const synth = new PolySynth(audio);
    synth.noteOn(0, 0, 60, 90);
    synth.noteOn(0, 0, 64, 90);
    synth.allOff(5);
    expect(synth.activeVoices()).toBe(0);
  });
});

describe('BarScheduler', () => {
  const BAR_TICKS = 1920;

  it('spreads a bar of ticks over the bar duration at the given bpm', () => {
    const scheduler = new BarScheduler(BAR_TICKS, 0.05);
    const start = scheduler.beginBar(10, 0, 120);
    expect(start).toBeCloseTo(10.05);
    expect(scheduler.timeFor(0)).toBeCloseTo(start);
    expect(scheduler.timeFor(960)).toBeCloseTo(start + 1.0); // half a 2 s bar
  });

  it('chains consecutive bars seamlessly when messages arrive early', () => {
    const scheduler = new BarScheduler(BAR_TICKS, 0.05);
    const first = scheduler.beginBar(0, 0, 120); // 2 s bar
    const second = scheduler.beginBar(0.5, 1, 120); // burst arrives early
    expect(second).toBeCloseTo(first + 2.0);
    expect(scheduler.timeFor(BAR_TICKS)).toBeCloseTo(second);
  });

  it('re-anchors after a stall instead of scheduling in the past', () => {
    const scheduler = new BarScheduler(BAR_TICKS, 0.05);
    scheduler.beginBar(0, 0, 120);
    const late = scheduler.beginBar(10, 1, 120); // way past bar 0's end
    expect(late).toBeCloseTo(10.05);
  });

  it('tracks tempo changes between bars', () => {
    const scheduler = new BarScheduler(BAR_TICKS, 0);
    scheduler.beginBar(0, 0, 60); // 4 s bar
    const second = scheduler.beginBar(3, 1, 120); // 2 s bar
    expect(second).toBeCloseTo(4);
    expect(scheduler.timeFor(BAR_TICKS + 960)).toBeCloseTo(second + 1);
  });
});
