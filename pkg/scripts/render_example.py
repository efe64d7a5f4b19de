#!/usr/bin/env python3
"""Render the bundled example song a few ways and print what changed.

Demonstrates the engine's determinism and the effect of the emotion curves:
the same song renders byte-identically under one seed, differently under
another, and flattening the curves to constants changes the music again.
"""

from __future__ import annotations

from pathlib import Path

from dynsong.blocks import default_registry
from dynsong.cli import builtin_library
from dynsong.curves import constant_set, load_curves
from dynsong.graph import load_song
from dynsong.render import render_song

OUT = Path("out")


def main() -> None:
    OUT.mkdir(exist_ok=True)
    registry = default_registry()
    graph = load_song(builtin_library() / "example.song.json")
    curves = load_curves(builtin_library() / "example.curves.json")

    renders = {
        "example_seed42.mid": render_song(graph.with_seed(42), registry, curves),
        "example_seed42_again.mid": render_song(graph.with_seed(42), registry, curves),
        "example_seed7.mid": render_song(graph.with_seed(7), registry, curves),
        "example_calm.mid": render_song(
            graph.with_seed(42), registry, constant_set(0.1, 0.8, 0.1)
        ),
        "example_tense.mid": render_song(
            graph.with_seed(42), registry, constant_set(0.9, 0.1, 0.9)
        ),
    }
    for name, data in renders.items():
        (OUT / name).write_bytes(data)
        print(f"{name}: {len(data)} bytes")

    same = renders["example_seed42.mid"] == renders["example_seed42_again.mid"]
    print(f"\nseed 42 twice identical: {same}")
    print(f"seed 7 differs: {renders['example_seed7.mid'] != renders['example_seed42.mid']}")
    print(f"calm vs tense differ: {renders['example_calm.mid'] != renders['example_tense.mid']}")


if __name__ == "__main__":
    main()
