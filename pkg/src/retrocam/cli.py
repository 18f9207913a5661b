"""Command line front end.

Commands:
  demo        write a bundled demonstration scene as JSON
  render      photograph a scene: film points as CSV and/or a raster
  regions     full region analysis as a JSON report
  verify      run the assertion suite, one line per assertion
  rail-image  sample the rail's film curve as CSV

Exit codes: 0 on success, 1 when verify finds a failed assertion, 2 for
bad input, 3 for a numerical breakdown.  RETROCAM_LOG sets the log level
(error, warn, info, debug).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from ._util import dump_json
from .errors import InputError, NoRail, NumericalError, SchemaError
from .optics import sample_rail_image
from .regions import Analysis, analysis_report, analyze
from .render import (
    history_image,
    image_rows,
    rasterize,
    rows_csv,
    save_raster,
    train_on_rails_residual,
)
from .scenes import DEMO_NAMES, Scene, Tolerances, demo_scene, parse_scene, scene_to_json

log = logging.getLogger("retrocam")

RAIL_RESIDUAL_BOUND = 1e-9


@dataclasses.dataclass
class CliConfig:
    """Everything a command needs, folded out of argparse."""

    scene_path: str | None = None
    demo: str | None = None
    threads: int = 1
    eps_contact: float | None = None
    eps_set: float | None = None
    eps_time: float | None = None
    grid: int | None = None
    seed: int | None = None


def _setup_logging() -> None:
    level = {
        "error": logging.ERROR,
        "warn": logging.WARNING,
        "warning": logging.WARNING,
        "info": logging.INFO,
        "debug": logging.DEBUG,
    }.get(os.environ.get("RETROCAM_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _scene_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scene", help="path to a scene JSON document")
    p.add_argument("--demo", choices=DEMO_NAMES, help="use a bundled demo scene")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads (output is identical for any count)")
    p.add_argument("--eps-contact", type=float, help="override contact tolerance")
    p.add_argument("--eps-set", type=float, help="override set-matching tolerance")
    p.add_argument("--eps-time", type=float, help="override time tolerance")
    p.add_argument("--grid", type=int, help="override time grid size")
    p.add_argument("--seed", type=int, help="override scene seed")


def _config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        scene_path=getattr(args, "scene", None),
        demo=getattr(args, "demo", None),
        threads=max(1, args.threads),
        eps_contact=args.eps_contact,
        eps_set=args.eps_set,
        eps_time=args.eps_time,
        grid=args.grid,
        seed=args.seed,
    )


def _load_scene(cfg: CliConfig) -> Scene:
    if (cfg.scene_path is None) == (cfg.demo is None):
        raise SchemaError("give exactly one of --scene and --demo")
    if cfg.demo is not None:
        scene = demo_scene(cfg.demo)
    else:
        try:
            with open(cfg.scene_path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"cannot read {cfg.scene_path}: {exc}") from exc
        scene = parse_scene(text)
    tol = scene.tolerances
    overrides = {
        name: value
        for name, value in (
            ("eps_contact", cfg.eps_contact),
            ("eps_set", cfg.eps_set),
            ("eps_time", cfg.eps_time),
        )
        if value is not None
    }
    if overrides:
        tol = dataclasses.replace(tol, **overrides)
    if overrides or cfg.grid is not None or cfg.seed is not None:
        scene = Scene(
            objects=scene.objects,
            film=scene.film,
            t_min=scene.t_min,
            tolerances=tol,
            time_grid_n=scene.time_grid_n if cfg.grid is None else cfg.grid,
            seed=scene.seed if cfg.seed is None else cfg.seed,
            rail=scene.rail,
        )
    return scene


def _parse_raster(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise SchemaError(f"--raster wants WIDTHxHEIGHT, got {text!r}") from exc


def _parse_window(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise SchemaError(f"--window wants Umin,Umax,Vmin,Vmax, got {text!r}")
    try:
        a, b, c, d = (float(p) for p in parts)
    except ValueError as exc:
        raise SchemaError(f"--window wants four numbers, got {text!r}") from exc
    return a, b, c, d


def _cmd_demo(args: argparse.Namespace) -> int:
    scene = demo_scene(args.name)
    text = scene_to_json(scene)
    if scene_to_json(parse_scene(text)) != text:
        raise SchemaError("demo scene did not survive a parse round trip")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {args.name} scene to {args.out}")
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    cfg = _config(args)
    scene = _load_scene(cfg)
    analysis = analyze(scene, threads=cfg.threads)
    rows = image_rows(analysis)
    image = history_image(analysis)
    if image.skipped:
        log.warning("%d emission(s) behind the pinhole were skipped", image.skipped)
    wrote = False
    if args.points:
        with open(args.points, "w", encoding="utf-8", newline="") as fh:
            fh.write(rows_csv(rows))
        wrote = True
    if args.raster:
        if not args.out:
            raise SchemaError("--raster needs --out for the image file")
        width, height = _parse_raster(args.raster)
        window = _parse_window(args.window) if args.window else None
        canvas = rasterize(image, width, height, window=window)
        save_raster(canvas, args.out)
        wrote = True
    if not wrote:
        print(f"{len(image.points)} film point(s), {image.skipped} skipped")
    return 0


def _cmd_regions(args: argparse.Namespace) -> int:
    cfg = _config(args)
    scene = _load_scene(cfg)
    report = analysis_report(analyze(scene, threads=cfg.threads))
    text = dump_json(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _rail_containment_entry(analysis: Analysis) -> dict | None:
    try:
        residual = train_on_rails_residual(analysis)
    except NoRail:
        return None
    status = "pass" if residual <= RAIL_RESIDUAL_BOUND else "fail"
    return {
        "id": "rail_containment",
        "status": status,
        "max_violation": residual,
        "detail": f"worst rail-image residual {residual:.3e} "
                  f"(bound {RAIL_RESIDUAL_BOUND:.0e})",
        "witnesses": [],
    }


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    scene = _load_scene(cfg)
    analysis = analyze(scene, threads=cfg.threads)
    report = analysis_report(analysis)
    rail_entry = _rail_containment_entry(analysis)
    if rail_entry is not None:
        report["assertions"].append(rail_entry)
    failed = 0
    for entry in report["assertions"]:
        print(f"assertion {entry['id']}: {entry['status']} "
              f"(max violation {entry['max_violation']:.3e}) {entry['detail']}")
        if entry["status"] == "fail":
            failed += 1
            for witness in entry["witnesses"]:
                print(f"    {witness}")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dump_json(report))
        print(f"report written to {args.report}")
    print(f"overall: {'fail' if failed else 'pass'}")
    return 1 if failed else 0


def _cmd_rail_image(args: argparse.Namespace) -> int:
    cfg = _config(args)
    scene = _load_scene(cfg)
    if scene.rail is None:
        raise NoRail("the scene has no rail to image")
    points = sample_rail_image(scene.rail, scene.film, args.points)
    from ._util import format_float
    lines = ["U,V"] + [
        f"{format_float(p.U)},{format_float(p.V)}" for p in points
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retrocam",
        description="retarded-time photography of two-object scenes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_demo = sub.add_parser("demo", help="write a bundled demo scene")
    p_demo.add_argument("name", choices=DEMO_NAMES)
    p_demo.add_argument("--out", required=True, help="output scene JSON path")
    p_demo.set_defaults(fn=_cmd_demo)

    p_render = sub.add_parser("render", help="photograph a scene")
    _scene_options(p_render)
    p_render.add_argument("--points", help="write film points CSV here")
    p_render.add_argument("--raster", help="raster size as WIDTHxHEIGHT")
    p_render.add_argument("--out", help="raster output path (.ppm or .png)")
    p_render.add_argument("--window", help="film window as Umin,Umax,Vmin,Vmax")
    p_render.set_defaults(fn=_cmd_render)

    p_regions = sub.add_parser("regions", help="region analysis report")
    _scene_options(p_regions)
    p_regions.add_argument("--report", help="write the JSON report here")
    p_regions.set_defaults(fn=_cmd_regions)

    p_verify = sub.add_parser("verify", help="run the assertion suite")
    _scene_options(p_verify)
    p_verify.add_argument("--report", help="also write the JSON report here")
    p_verify.set_defaults(fn=_cmd_verify)

    p_rail = sub.add_parser("rail-image", help="sample the rail's film curve")
    _scene_options(p_rail)
    p_rail.add_argument("--points", type=int, default=256,
                        help="number of curve samples")
    p_rail.add_argument("--out", help="CSV output path (default stdout)")
    p_rail.set_defaults(fn=_cmd_rail_image)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
