"""Command-line entry points: render, validate, list-blocks, serve.

Exit codes are part of the contract: 0 success, 1 validation failure,
2 I/O failure. With --json, errors go to stderr as a JSON array of
diagnostic objects.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .blocks import default_registry
from .curves import CurveFileError, load_curves
from .graph import SongFormatError, load_song, validate_graph
from .render import render_song
from .server import CURVES_SUFFIX, SONG_SUFFIX, ServerConfig, run_server

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def builtin_library() -> Path:
    return Path(__file__).resolve().parent / "assets" / "library"


@dataclass(frozen=True)
class RenderRequest:
    song: Path
    curves: Path
    out: Path
    seed: Optional[int] = None
    bars: Optional[int] = None


def _resolve_song(ref: str, library: Path) -> tuple[Path, Path]:
    """Turn a song reference (file path or library id) into (song, curves) paths."""
    path = Path(ref)
    looks_like_path = path.suffix == ".json" or len(path.parts) > 1 or path.is_file()
    if looks_like_path:
        if path.name.endswith(SONG_SUFFIX):
            stem = path.name[: -len(SONG_SUFFIX)]
            return path, path.parent / f"{stem}{CURVES_SUFFIX}"
        return path, path.with_suffix(".curves.json")
    return library / f"{ref}{SONG_SUFFIX}", library / f"{ref}{CURVES_SUFFIX}"


def _emit_errors(errors: list[dict], as_json: bool) -> None:
    if as_json:
        print(json.dumps(errors), file=sys.stderr)
    else:
        for err in errors:
            print(f"error: {err['message']}", file=sys.stderr)


def cmd_render(request: RenderRequest, as_json: bool = False) -> int:
    registry = default_registry()
    try:
        graph = load_song(request.song)
        curves = load_curves(request.curves)
    except (SongFormatError, CurveFileError) as exc:
        _emit_errors([{"code": "load_failed", "message": m} for m in exc.errors], as_json)
        return EXIT_IO
    if request.seed is not None:
        graph = graph.with_seed(request.seed)
    if request.bars is not None:
        if request.bars < 1:
            _emit_errors([{"code": "bad_flag", "message": "--bars must be >= 1"}], as_json)
            return EXIT_VALIDATION
        graph = graph.with_length(request.bars)
    diagnostics = validate_graph(graph, registry)
    if diagnostics:
        _emit_errors([d.to_dict() for d in diagnostics], as_json)
        return EXIT_VALIDATION
    data = render_song(graph, registry, curves)
    try:
        request.out.parent.mkdir(parents=True, exist_ok=True)
        request.out.write_bytes(data)
    except OSError as exc:
        _emit_errors(
            [{"code": "write_failed", "message": f"{request.out}: {exc.strerror or exc}"}],
            as_json,
        )
        return EXIT_IO
    return EXIT_OK


def cmd_validate(song_path: Path, as_json: bool = False) -> int:
    registry = default_registry()
    try:
        graph = load_song(song_path)
    except SongFormatError as exc:
        _emit_errors([{"code": "load_failed", "message": m} for m in exc.errors], as_json)
        return EXIT_IO
    diagnostics = validate_graph(graph, registry)
    if diagnostics:
        _emit_errors([d.to_dict() for d in diagnostics], as_json)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_list_blocks(as_json: bool = False) -> int:
    registry = default_registry()
    if as_json:
        print(json.dumps([d.to_dict() for d in registry.descriptors()], indent=2))
        return EXIT_OK
    for descriptor in registry.descriptors():
        print(descriptor.kind)
        if descriptor.description:
            print(f"    {descriptor.description}")
        for port in descriptor.inputs:
            req = " (required)" if port.required else ""
            print(f"    in  {port.name}: {port.type.value}{req}")
        for port in descriptor.outputs:
            print(f"    out {port.name}: {port.type.value}")
        for name, spec in descriptor.params.items():
            print(f"    param {name}: {spec.kind} = {spec.default!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynsong",
        description="Dynamic-song engine: render, validate and serve graph songs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    render = sub.add_parser("render", help="render a song + curves to a MIDI file")
    render.add_argument("song", help="song file path or library id")
    render.add_argument("--curves", help="curve file (default: paired with the song)")
    render.add_argument("--out", help="output .mid path (default: <song stem>.mid)")
    render.add_argument("--seed", type=int, help="override the song's master seed")
    render.add_argument("--bars", type=int, help="override the song length in bars")
    render.add_argument("--library", type=Path, default=builtin_library())
    render.add_argument("--json", action="store_true", help="machine-readable errors")

    validate = sub.add_parser("validate", help="check a song file, print diagnostics")
    validate.add_argument("song", help="song file path or library id")
    validate.add_argument("--library", type=Path, default=builtin_library())
    validate.add_argument("--json", action="store_true")

    blocks = sub.add_parser("list-blocks", help="dump the block registry")
    blocks.add_argument("--json", action="store_true")

    serve = sub.add_parser("serve", help="run the live session server")
    serve.add_argument("--config", type=Path, help="JSON config file")
    serve.add_argument("--library", type=Path, help="library directory override")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.add_argument("--seed", type=int, help="default master-seed override")
    serve.add_argument("--ui", type=Path, help="built web client directory to serve at /ui")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "render":
        song, curves = _resolve_song(args.song, args.library)
        if args.curves:
            curves = Path(args.curves)
        stem = song.name[: -len(SONG_SUFFIX)] if song.name.endswith(SONG_SUFFIX) else song.stem
        out = Path(args.out) if args.out else Path(f"{stem}.mid")
        request = RenderRequest(
            song=song, curves=curves, out=out, seed=args.seed, bars=args.bars
        )
        return cmd_render(request, as_json=args.json)
    if args.command == "validate":
        song, _ = _resolve_song(args.song, args.library)
        return cmd_validate(song, as_json=args.json)
    if args.command == "list-blocks":
        return cmd_list_blocks(as_json=args.json)
    if args.command == "serve":
        if args.config:
            config = ServerConfig.from_file(args.config)
        else:
            config = ServerConfig(library=builtin_library())
        if args.library:
            config.library = args.library
        if args.host:
            config.host = args.host
        if args.port:
            config.port = args.port
        if args.seed is not None:
            config.default_seed = args.seed
        if args.ui:
            config.ui_dir = args.ui
        run_server(config)
        return EXIT_OK
    raise AssertionError("unreachable")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
