"""JSON game documents, report documents and CSV heatmaps."""
from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, TextIO

from decoygame.errors import ParseError, SchemaError, ValidationError
from decoygame.game import GameGraph, Player, validate_game
from decoygame.placement import CandidateGroup, PlacementReport

GAME_SCHEMA = "decoygame/game"
REPORT_SCHEMA = "decoygame/report"
VERSION = 1


@dataclass
class GridMeta:
    rows: int
    cols: int
    cells: dict[str, tuple[int, int]]


@dataclass
class GameDocument:
    game: GameGraph
    candidates: list[CandidateGroup] | None = None
    grid: GridMeta | None = None


def game_to_dict(g: GameGraph, candidates=None, grid: GridMeta | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "schema": GAME_SCHEMA,
        "version": VERSION,
        "states": [{"id": s, "name": g.state_names[s], "owner": g.owner[s].name} for s in g.states],
        "actions": [
            {"id": a, "name": name, "owner": owner.name}
            for a, (name, owner) in enumerate(zip(g.action_names, g.action_owner))
        ],
        "transitions": [{"from": s, "action": a, "to": t} for s in g.states for a, t in g.edges[s]],
        "initial": g.initial,
        "finals": sorted(g.finals),
    }
    if candidates is not None:
        groups = []
        for grp in candidates:
            entry: dict[str, Any] = {"name": grp.name, "members": sorted(grp.members)}
            if grid is not None and grp.name in grid.cells:
                entry["cell"] = list(grid.cells[grp.name])
            groups.append(entry)
        doc["candidates"] = {"groups": groups}
        if grid is not None:
            doc["candidates"]["grid"] = {
                "rows": grid.rows,
                "cols": grid.cols,
                "cells": {name: list(cell) for name, cell in sorted(grid.cells.items())},
            }
    return doc


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    return obj[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer id, got {value!r}")
    return value


def game_from_dict(doc: dict[str, Any], validate: bool = True) -> GameDocument:
    if not isinstance(doc, dict):
        raise SchemaError("document root must be an object")
    schema = doc.get("schema", GAME_SCHEMA)
    if schema != GAME_SCHEMA:
        raise SchemaError(f"unexpected schema {schema!r}")
    version = doc.get("version", VERSION)
    if version != VERSION:
        raise SchemaError(f"unsupported version {version!r}")

    raw_states = _need(doc, "states", "document")
    raw_actions = _need(doc, "actions", "document")
    raw_trans = _need(doc, "transitions", "document")
    n = len(raw_states)

    names, owners = [None] * n, [None] * n
    for i, st in enumerate(raw_states):
        where = f"states[{i}]"
        sid = _as_int(_need(st, "id", where), where)
        if not 0 <= sid < n or names[sid] is not None:
            raise SchemaError(f"{where}: ids must be dense and unique (got {sid})")
        try:
            owners[sid] = Player.parse(_need(st, "owner", where))
        except ValueError as exc:
            raise SchemaError(f"{where}: {exc}") from None
        names[sid] = str(st.get("name", f"s{sid}"))

    m = len(raw_actions)
    anames, aowners = [None] * m, [None] * m
    for i, act in enumerate(raw_actions):
        where = f"actions[{i}]"
        aid = _as_int(_need(act, "id", where), where)
        if not 0 <= aid < m or anames[aid] is not None:
            raise SchemaError(f"{where}: ids must be dense and unique (got {aid})")
        try:
            aowners[aid] = Player.parse(_need(act, "owner", where))
        except ValueError as exc:
            raise SchemaError(f"{where}: {exc}") from None
        anames[aid] = str(act.get("name", f"act{aid}"))

    edges: list[dict[int, int]] = [{} for _ in range(n)]
    for i, tr in enumerate(raw_trans):
        where = f"transitions[{i}]"
        s = _as_int(_need(tr, "from", where), where)
        a = _as_int(_need(tr, "action", where), where)
        t = _as_int(_need(tr, "to", where), where)
        if not 0 <= s < n:
            raise SchemaError(f"{where} ({s}, {a}, {t}): dangling source state {s}")
        if not 0 <= a < m:
            raise SchemaError(f"{where} ({s}, {a}, {t}): dangling action {a}")
        if not 0 <= t < n:
            raise SchemaError(f"{where} ({s}, {a}, {t}): dangling target state {t}")
        if a in edges[s] and edges[s][a] != t:
            raise SchemaError(f"{where} ({s}, {a}, {t}): second successor for the same state and action")
        edges[s][a] = t

    initial = _as_int(_need(doc, "initial", "document"), "initial")
    if not 0 <= initial < n:
        raise SchemaError(f"initial: dangling state {initial}")
    finals = []
    for f in _need(doc, "finals", "document"):
        f = _as_int(f, "finals")
        if not 0 <= f < n:
            raise SchemaError(f"finals: dangling state {f}")
        finals.append(f)

    g = GameGraph(
        state_names=tuple(names),
        owner=tuple(owners),
        action_names=tuple(anames),
        action_owner=tuple(aowners),
        edges=tuple(tuple(sorted(e.items())) for e in edges),
        initial=initial,
        finals=frozenset(finals),
    )
    if validate:
        problems = validate_game(g)
        if problems:
            raise ValidationError(problems)

    candidates = grid = None
    if "candidates" in doc:
        cand = doc["candidates"]
        candidates = []
        for i, grp in enumerate(_need(cand, "groups", "candidates")):
            where = f"candidates.groups[{i}]"
            members = frozenset(_as_int(x, where) for x in _need(grp, "members", where))
            if any(not 0 <= x < n for x in members):
                raise SchemaError(f"{where}: dangling member state")
            candidates.append(CandidateGroup(str(_need(grp, "name", where)), members))
        if "grid" in cand:
            gm = cand["grid"]
            grid = GridMeta(
                rows=_as_int(_need(gm, "rows", "candidates.grid"), "candidates.grid.rows"),
                cols=_as_int(_need(gm, "cols", "candidates.grid"), "candidates.grid.cols"),
                cells={name: tuple(cell) for name, cell in gm.get("cells", {}).items()},
            )
    return GameDocument(g, candidates, grid)


def _read_text(path: str | Path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_document(path: str | Path, validate: bool = True) -> GameDocument:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return game_from_dict(data, validate=validate)


def load_game(path: str | Path, validate: bool = True) -> GameGraph:
    return load_document(path, validate=validate).game


def dumps_game(g: GameGraph, candidates=None, grid: GridMeta | None = None) -> str:
    return json.dumps(game_to_dict(g, candidates, grid), indent=1) + "\n"


def save_game(g: GameGraph, path: str | Path, candidates=None, grid: GridMeta | None = None) -> None:
    Path(path).write_text(dumps_game(g, candidates, grid), encoding="utf-8")


def fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def placement_report_to_dict(g: GameGraph, report: PlacementReport, seconds: float | None = None) -> dict[str, Any]:
    p = report.placement
    doc = {
        "schema": REPORT_SCHEMA,
        "version": VERSION,
        "mode": report.mode.value,
        "placement": {
            "traps": [grp.name for grp in report.traps],
            "fakes": [grp.name for grp in report.fakes],
            "trap_states": g.names(p.traps),
            "fake_states": g.names(p.fakes),
        },
        "region": g.names(report.final_region),
        "vod": float(report.final_vod),
        "vod_fraction": fraction_text(report.final_vod),
        "iterations": [
            {"kind": kind, "heatmap": {name: float(v) for name, v in heat.items()}}
            for kind, heat in zip(report.iteration_kinds, report.iterations)
        ],
    }
    if seconds is not None:
        doc["timing"] = {"seconds": round(seconds, 6)}
    return doc


def heatmap_rows(heat: dict[str, Fraction], grid: GridMeta, digits: int = 4) -> list[list[str]]:
    """Row-major grid of VoD values; ``NA`` where no decoy can be placed."""
    table = [["NA"] * grid.cols for _ in range(grid.rows)]
    for name, value in heat.items():
        cell = grid.cells.get(name)
        if cell is not None:
            r, c = cell
            table[r][c] = f"{float(value):.{digits}f}"
    return table


def heatmap_csv(heat: dict[str, Fraction], grid: GridMeta) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(heatmap_rows(heat, grid))
    return buf.getvalue()


def write_text(text: str, out: str | Path | None, stream: TextIO | None = None) -> None:
    if out is None or str(out) == "-":
        (stream or sys.stdout).write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
