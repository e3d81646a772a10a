"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 resource guard tripped.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from importlib import resources
from pathlib import Path

from decoygame.errors import DecoyGameError, TooLarge, TooManyCombinations
from decoygame.game import DecoyPlacement, Player
from decoygame.generators import GridworldConfig, cell_name, gridworld, gridworld_candidates, random_game
from decoygame.hypergame import Mode, deceptive_region
from decoygame.io import (
    GameDocument,
    GridMeta,
    dumps_game,
    fraction_text,
    heatmap_csv,
    load_document,
    placement_report_to_dict,
    write_text,
)
from decoygame.placement import exhaustive_place, greedy_place, superadditivity_audit, vod
from decoygame.solver import attractor

EXIT_OK, EXIT_INVALID, EXIT_GUARD = 0, 1, 2

BUNDLED = ("running_example.json", "toy_counterexample.json")


def bundled_path(name: str):
    return resources.files("decoygame").joinpath("data", name)


def _open_game(path: str) -> GameDocument:
    if path != "-" and not Path(path).exists() and Path(path).name in BUNDLED:
        with resources.as_file(bundled_path(Path(path).name)) as p:
            return load_document(p)
    return load_document(path)


def _names(text: str | None) -> list[str]:
    if not text:
        return []
    return [x.strip() for x in text.split(",") if x.strip()]


def _cells(text: str | None) -> list[tuple[int, int]]:
    """Parse ``"r,c;r,c"`` into cells."""
    if not text:
        return []
    cells = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            r, c = chunk.strip("()").split(",")
            cells.append((int(r), int(c)))
    return cells


def _cell(text: str | None):
    cells = _cells(text)
    return cells[0] if cells else None


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


def _rows_csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _placement(doc: GameDocument, args) -> DecoyPlacement:
    return DecoyPlacement.named(doc.game, traps=_names(args.trap_states), fakes=_names(args.fake_states))


def cmd_solve(args) -> str:
    doc = _open_game(args.game)
    g = doc.game
    reacher = Player.parse(args.reacher)
    target = g.ids(_names(args.target)) if args.target else g.finals
    res = attractor(g, target, reacher)
    if args.format == "csv":
        rows = [("state", "owner", "rank", "winner")]
        for s in g.states:
            rank = res.rank[s]
            winner = reacher if rank != math.inf else reacher.opponent
            rows.append((g.state_names[s], g.owner[s].name, "inf" if rank == math.inf else rank, winner.name))
        return _rows_csv(rows)
    p1_region = res.win_reacher if reacher is Player.P1 else res.win_opponent
    p2_region = res.win_reacher if reacher is Player.P2 else res.win_opponent
    out = {
        "n_states": g.n_states,
        "n_transitions": g.n_transitions,
        "reacher": reacher.name,
        "target": g.names(sorted(target)),
        "win1": g.names(sorted(p1_region)),
        "win2": g.names(sorted(p2_region)),
        "levels": len(res.levels) - 1,
        "ranks": {g.state_names[s]: (None if res.rank[s] == math.inf else res.rank[s]) for s in g.states},
    }
    return _dump_json(out)


def _region_output(args, mode: Mode) -> str:
    doc = _open_game(args.game)
    g = doc.game
    p = _placement(doc, args)
    start = time.perf_counter()
    region = deceptive_region(g, p, mode)
    value = vod(g, p, mode)
    elapsed = time.perf_counter() - start
    if args.format == "csv":
        return _rows_csv([("state",)] + [(g.state_names[s],) for s in sorted(region)])
    out = {
        "mode": mode.value,
        "placement": {"trap_states": g.names(sorted(p.traps)), "fake_states": g.names(sorted(p.fakes))},
        "region": g.names(sorted(region)),
        "vod": float(value),
        "vod_fraction": fraction_text(value),
        "timing": {"seconds": round(elapsed, 6)},
    }
    return _dump_json(out)


def cmd_dswin(args) -> str:
    return _region_output(args, Mode.SURE)


def cmd_daswin(args) -> str:
    return _region_output(args, Mode.ALMOST_SURE)


def cmd_vod(args) -> str:
    return _region_output(args, Mode.parse(args.mode))


def cmd_place_greedy(args) -> str:
    doc = _open_game(args.game)
    g = doc.game
    start = time.perf_counter()
    report = greedy_place(g, args.traps, args.fakes, args.mode, doc.candidates)
    elapsed = time.perf_counter() - start
    if args.format == "csv":
        if not report.iterations:
            return ""
        k = args.iteration - 1
        if not 0 <= k < len(report.iterations):
            raise DecoyGameError(f"--iteration must be between 1 and {len(report.iterations)}")
        heat = report.iterations[k]
        if doc.grid is not None:
            return heatmap_csv(heat, doc.grid)
        return _rows_csv([("candidate", "vod")] + [(name, f"{float(v):.4f}") for name, v in heat.items()])
    return _dump_json(placement_report_to_dict(g, report, elapsed))


def cmd_place_exhaustive(args) -> str:
    doc = _open_game(args.game)
    g = doc.game
    start = time.perf_counter()
    best, optimum = exhaustive_place(g, args.traps, args.fakes, args.mode, doc.candidates, limit=args.limit)
    elapsed = time.perf_counter() - start
    if args.format == "csv":
        rows = [("trap_states", "fake_states")]
        rows += [(" ".join(g.names(sorted(p.traps))), " ".join(g.names(sorted(p.fakes)))) for p in best]
        return _rows_csv(rows)
    out = {
        "mode": Mode.parse(args.mode).value,
        "optimum": float(optimum),
        "optimum_fraction": fraction_text(optimum),
        "placements": [
            {"trap_states": g.names(sorted(p.traps)), "fake_states": g.names(sorted(p.fakes))} for p in best
        ],
        "timing": {"seconds": round(elapsed, 6)},
    }
    return _dump_json(out)


def cmd_gen_gridworld(args) -> str:
    if args.config:
        cfg = GridworldConfig.from_dict(json.loads(Path(args.config).read_text(encoding="utf-8")))
    else:
        cfg = GridworldConfig(
            rows=args.rows,
            cols=args.cols,
            obstacles=frozenset(_cells(args.obstacles)),
            cheese=frozenset(_cells(args.cheese)),
            cat_start=_cell(args.cat_start),
            mouse_start=_cell(args.mouse_start),
            first_turn=args.first_turn,
        )
    g, groups = gridworld(cfg)
    candidates = gridworld_candidates(groups)
    grid = GridMeta(cfg.rows, cfg.cols, {cell_name(c): c for c, members in groups.items() if members})
    return dumps_game(g, candidates, grid)


def cmd_gen_random(args) -> str:
    g = random_game(args.states, args.p1, args.max_actions, args.seed, args.finals)
    return dumps_game(g)


def cmd_audit(args) -> str:
    doc = _open_game(args.game)
    g = doc.game
    rep = superadditivity_audit(g, args.mode, args.samples, args.seed, args.kind, args.max_base)

    def show(x):
        return {
            "base": g.names(sorted(x.base)),
            "added": g.state_names[x.added],
            "sizes": [x.size_base, x.size_added, x.size_union],
        }

    out = {
        "mode": rep.mode.value,
        "kind": rep.kind,
        "samples": len(rep.samples),
        "superadditivity_violations": len(rep.superadditivity_violations),
        "monotonicity_violations": len(rep.monotonicity_violations),
        "union_containment_violations": len(rep.union_containment_violations),
        "greedy_bound_applicable": rep.greedy_bound_applicable,
        "examples": [show(x) for x in rep.superadditivity_violations[:5]],
    }
    return _dump_json(out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    mode = argparse.ArgumentParser(add_help=False)
    mode.add_argument("--mode", choices=("sure", "almost-sure"), default="sure")

    decoys = argparse.ArgumentParser(add_help=False)
    decoys.add_argument("--trap-states", help="comma-separated trap state names")
    decoys.add_argument("--fake-states", help="comma-separated fake-target state names")

    budgets = argparse.ArgumentParser(add_help=False)
    budgets.add_argument("--traps", type=int, default=0, metavar="M")
    budgets.add_argument("--fakes", type=int, default=0, metavar="N")

    game = argparse.ArgumentParser(add_help=False)
    game.add_argument("game", help="game JSON file, or - for standard input")

    parser = argparse.ArgumentParser(prog="decoygame", description="Reachability games with decoys.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common, game], help="attractor, ranks and winning regions")
    p.add_argument("--reacher", default="P2", choices=("P1", "P2"))
    p.add_argument("--target", help="comma-separated target states (default: the finals)")
    p.set_defaults(func=cmd_solve)

    for name, func in (("dswin", cmd_dswin), ("daswin", cmd_daswin)):
        p = sub.add_parser(name, parents=[common, decoys, game], help=f"{name} region for a placement")
        p.set_defaults(func=func)

    p = sub.add_parser("vod", parents=[common, mode, decoys, game], help="value of deception of a placement")
    p.set_defaults(func=cmd_vod)

    place = sub.add_parser("place", help="decoy placement").add_subparsers(dest="method", required=True)
    p = place.add_parser("greedy", parents=[common, mode, budgets, game])
    p.add_argument("--iteration", type=int, default=1, help="heatmap to emit with --format csv (1-based)")
    p.set_defaults(func=cmd_place_greedy)
    p = place.add_parser("exhaustive", parents=[common, mode, budgets, game])
    p.add_argument("--limit", type=int, default=100_000, help="maximum placements to enumerate")
    p.set_defaults(func=cmd_place_exhaustive)

    gen = sub.add_parser("gen", help="game generators").add_subparsers(dest="generator", required=True)
    p = gen.add_parser("gridworld", parents=[common])
    p.add_argument("--config", help="JSON gridworld config (overrides the flags below)")
    p.add_argument("--rows", type=int, default=7)
    p.add_argument("--cols", type=int, default=7)
    p.add_argument("--obstacles", help='cells as "r,c;r,c"')
    p.add_argument("--cheese", help='cells as "r,c;r,c"')
    p.add_argument("--cat-start", help='cell as "r,c"')
    p.add_argument("--mouse-start", help='cell as "r,c"')
    p.add_argument("--first-turn", default="P2", choices=("P1", "P2"), help="P2 (mouse) moves first by default")
    p.set_defaults(func=cmd_gen_gridworld)
    p = gen.add_parser("random", parents=[common])
    p.add_argument("--states", type=int, default=150)
    p.add_argument("--p1", type=int, default=75)
    p.add_argument("--max-actions", type=int, default=5)
    p.add_argument("--finals", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_random)

    p = sub.add_parser("audit", parents=[common, mode, game], help="sample growth properties of the region map")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=("fake", "trap"), default="fake")
    p.add_argument("--max-base", type=int, default=3)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
        write_text(text, args.out)
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        sys.stderr.close()
        return EXIT_OK
    except (TooLarge, TooManyCombinations) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (DecoyGameError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
