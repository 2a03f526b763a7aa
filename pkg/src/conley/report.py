"""Scenario orchestration and machine-readable reports.

A report is one JSON document (keys sorted, two-space indent) plus optional
CSV files for witness paths and per-slice Betti curves. Reports carry no
timestamps, so a fixed configuration always yields identical bytes.
"""
import csv
import hashlib
import json
import os
from fractions import Fraction

from . import __version__
from .dynamics import build_transition_graph, thread_cap
from .errors import ConleyError, UnsupportedRing
from .index import (
    analyze_connection,
    direct_limit,
    orbit_detector,
    perturbation_sweep,
    slice_homology_system,
)
from .pairs import build_index_pair, build_index_triple, isolating_check, thicken_exit, \
    thicken_triple
from .homology import relative_homology
from .index.limit import slice_pair

#: Diagnostics with these codes make the run fail (exit code 1).
HARD_CODES = frozenset({"E_INTERNAL", "E_IRREGULAR", "E_EXACTNESS", "E_NOTISOLATING", "E_SIZE",
                        "E_PRECONDITION"})

_PATH = {
    "type": ["object", "null"],
    "required": ["cells", "note"],
    "additionalProperties": False,
    "properties": {
        "cells": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        "note": {"type": "string"},
    },
}
_RANKS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_CURVE = {"type": "array", "items": {
    "type": "object", "required": ["slice", "ranks"], "additionalProperties": False,
    "properties": {"slice": {"type": "integer"}, "ranks": _RANKS,
                   "torsion": {"type": "array"}}}}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "config_hash", "scenario", "status", "betti", "index", "les",
                 "boundary_ranks", "connectedness", "witnesses", "sweep", "diagnostics"],
    "properties": {
        "version": {"type": "string"},
        "config_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "scenario": {"type": "object"},
        "status": {"enum": ["ok", "partial", "failed"]},
        "betti": {"type": "object", "additionalProperties": _CURVE},
        "index": {
            "type": ["object", "null"],
            "additionalProperties": False,
            "required": ["ring", "k0", "ranks", "window", "isolating"],
            "properties": {
                "ring": {"type": "string"},
                "k0": {"type": ["integer", "null"]},
                "ranks": {"anyOf": [_RANKS, {"type": "null"}]},
                "window": {"type": "array", "items": {"type": "integer"}},
                "isolating": {"type": "boolean"},
                "rank_history": {"type": "array"},
                "transitions": {"type": "object"},
            },
        },
        "les": {
            "type": ["object", "null"],
            "additionalProperties": False,
            "required": ["slice", "exact", "ranks", "nodes", "stabilization"],
            "properties": {
                "slice": {"type": "integer"},
                "exact": {"type": "boolean"},
                "ranks": {"type": "object"},
                "nodes": {"type": "array"},
                "stabilization": {"type": "object"},
                "matrices": {"type": "object"},
            },
        },
        "boundary_ranks": {"type": ["object", "null"],
                           "additionalProperties": {"type": "integer", "minimum": 0}},
        "connectedness": {
            "type": ["object", "null"],
            "additionalProperties": False,
            "required": ["verdict", "witness_slice", "gap_cubes", "degenerate"],
            "properties": {
                "verdict": {"enum": ["uniformly connected", "not uniformly connected"]},
                "witness_slice": {"type": ["integer", "null"]},
                "gap_cubes": {"type": "object"},
                "degenerate": {"type": "boolean"},
            },
        },
        "witnesses": {"type": "object", "additionalProperties": _PATH},
        "sweep": {"type": ["array", "null"], "items": {
            "type": "object",
            "required": ["amplitude", "isolating", "boundary_ranks", "verdict", "connection",
                         "orbit_N_R", "orbit_N_A", "persists", "errors"],
            "additionalProperties": False,
            "properties": {
                "amplitude": {"type": "number"},
                "isolating": {"type": ["boolean", "null"]},
                "boundary_ranks": {"type": ["object", "null"]},
                "verdict": {"type": ["string", "null"]},
                "connection": {"type": "boolean"},
                "orbit_N_R": {"type": "boolean"},
                "orbit_N_A": {"type": "boolean"},
                "persists": {"type": "boolean"},
                "errors": {"type": "array"},
            }}},
        "diagnostics": {"type": "array", "items": {
            "type": "object", "required": ["stage", "code", "message", "hard"],
            "additionalProperties": False,
            "properties": {"stage": {"type": "string"}, "code": {"type": "string"},
                           "message": {"type": "string"}, "hard": {"type": "boolean"}}}},
    },
}


def config_hash(cfg):
    canon = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _diag(stage, exc):
    code = getattr(exc, "code", "E_INTERNAL")
    return {"stage": stage, "code": code, "message": str(exc), "hard": code in HARD_CODES}


def _entry(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return int(x)


def _matrices(gmap):
    return {str(n): [[_entry(x) for x in row] for row in gmap.matrix(n).tolist()]
            for n in gmap.degrees()}


def _curve(pair, G, ring):
    out = []
    for k in range(G.nslices):
        h = relative_homology(slice_pair(pair, k), ring)
        row = {"slice": k, "ranks": list(h.ranks)}
        if ring == "Z":
            row["torsion"] = [list(t) for t in h.torsion]
        out.append(row)
    return out


def _path(w):
    return None if w is None else w.to_dict()


def _index_section(cfg, N, G, threads, doc, diags):
    ring = cfg.homology.ring
    burn_in = cfg.time.burn_in
    isolating = isolating_check(N, G)
    sec = {"ring": ring, "k0": None, "ranks": None, "window": [burn_in, G.K - 1],
           "isolating": isolating}
    doc["index"] = sec
    if not isolating:
        diags.append({"stage": "index", "code": "E_NOTISOLATING", "hard": True,
                      "message": "the invariant part of N touches the boundary of N"})
        return
    P = build_index_pair(N, G, cfg.time.margin)
    Pm = thicken_exit(P, cfg.homology.thickening_m)
    doc["betti"]["index_pair"] = _curve(Pm, G, ring)
    doc["witnesses"]["orbit"] = _path(orbit_detector(P, burn_in))
    if ring == "Z":
        raise UnsupportedRing("transition maps and limits need field coefficients (F2 or Q)")
    system = slice_homology_system(Pm, burn_in, ring=ring, threads=threads)
    sec["rank_history"] = [[k, r] for k, r in system.rank_history()]
    if cfg.output.emit_matrices:
        sec["transitions"] = {f"{k},{l}": (_matrices(t) if not isinstance(t, Exception)
                                           else {"error": t.code})
                              for (k, l), t in sorted(system.transitions.items())}
    result = direct_limit(system)
    sec["k0"] = result.k0
    sec["ranks"] = result.ranks


def _connection_section(cfg, G, N, threads, doc, diags):
    grid = G.grid
    N_A = cfg.region("N_A", grid)
    N_R = cfg.region("N_R", grid)
    if N_R is None:
        N_R = N - N_A
    U_A, U_R = cfg.region("U_A", grid), cfg.region("U_R", grid)
    ring = cfg.homology.ring
    try:
        T = thicken_triple(build_index_triple(N, N_A, G, cfg.time.margin),
                           cfg.homology.thickening_m)
        for name, pair in (("attractor", T.attractor), ("repeller", T.repeller),
                           ("total", T.outer)):
            doc["betti"][name] = _curve(pair, G, ring)
    except ConleyError as exc:
        diags.append(_diag("triple", exc))
    rep = analyze_connection(G, N, N_A, N_R, U_A, U_R, cfg.homology.thickening_m,
                             cfg.time.burn_in, ring, cfg.time.margin, threads)
    for stage, exc in sorted(rep.errors.items()):
        diags.append(_diag(stage, exc))
    les = rep.les
    if les is not None:
        sec = {"slice": les.slice, "exact": les.exact,
               "ranks": {"attractor": list(les.h_attractor.ranks),
                         "total": list(les.h_total.ranks),
                         "repeller": list(les.h_repeller.ranks)},
               "nodes": les.exactness.nodes,
               "stabilization": les.stabilization}
        if cfg.output.emit_matrices:
            sec["matrices"] = {"inclusion": _matrices(les.inclusion),
                               "projection": _matrices(les.projection),
                               "boundary": _matrices(les.boundary)}
        doc["les"] = sec
        doc["boundary_ranks"] = {str(n): r for n, r in sorted(rep.boundary_ranks.items())}
    doc["connectedness"] = rep.connectedness.to_dict()
    doc["witnesses"]["connection"] = _path(rep.connection)
    for name, w in sorted(rep.orbits.items()):
        doc["witnesses"][f"orbit_{name}"] = _path(w)
    return N_A, N_R, U_A, U_R


def _sweep_rows(cfg, N, regions, threads):
    N_A, N_R, U_A, U_R = regions
    grid = cfg.grid.build()
    forcing = cfg.system.forcing
    rows = perturbation_sweep(
        cfg.vector_field(amplitude=0.0), grid, cfg.time.tau, cfg.time.slices, N, N_A, N_R, U_A,
        U_R, cfg.sweep, cfg.homology.thickening_m, cfg.time.burn_in, cfg.homology.ring,
        cfg.time.margin, cfg.grid.padding, cfg.time.substeps, forcing.frequency,
        forcing.h_embedded, threads)
    out = []
    for row in rows:
        r = row.report
        errors = [] if row.error is None else [_diag("sweep", row.error)]
        if r is not None:
            errors += [_diag(stage, exc) for stage, exc in sorted(r.errors.items())]
        elif row.isolating is False:
            errors.append({"stage": "sweep", "code": "E_NOTISOLATING", "hard": False,
                           "message": "the invariant part of N touches the boundary of N"})
        out.append({
            "amplitude": row.amplitude,
            "isolating": row.isolating,
            "boundary_ranks": None if r is None or not r.boundary_ranks else
            {str(n): v for n, v in sorted(r.boundary_ranks.items())},
            "verdict": None if r is None else r.connectedness.verdict,
            "connection": r is not None and r.connection is not None,
            "orbit_N_R": r is not None and r.orbits.get("N_R") is not None,
            "orbit_N_A": r is not None and r.orbits.get("N_A") is not None,
            "persists": bool(row.persists),
            "errors": errors,
        })
    return out


def run_scenario(cfg, threads=None):
    """Run every stage the configuration asks for and return the report dict.

    Stage failures become diagnostics; the report is always produced.
    """
    threads = threads or thread_cap()
    doc = {"version": __version__, "config_hash": config_hash(cfg), "scenario": cfg.to_dict(),
           "betti": {}, "index": None, "les": None, "boundary_ranks": None,
           "connectedness": None, "witnesses": {}, "sweep": None}
    diags = []
    grid = cfg.grid.build()
    try:
        G = build_transition_graph(cfg.vector_field(), grid, cfg.time.tau, cfg.time.slices,
                                   cfg.grid.padding, cfg.time.substeps, threads=threads)
    except ConleyError as exc:
        diags.append(_diag("dynamics", exc))
        return _finish(doc, diags)
    N = cfg.region("N", grid)
    try:
        _index_section(cfg, N, G, threads, doc, diags)
    except ConleyError as exc:
        diags.append(_diag("index", exc))
    if cfg.regions.get("N_A") is not None:
        try:
            regions = _connection_section(cfg, G, N, threads, doc, diags)
            if cfg.sweep is not None:
                doc["sweep"] = _sweep_rows(cfg, N, regions, threads)
        except ConleyError as exc:
            diags.append(_diag("connection", exc))
    elif cfg.sweep is not None:
        diags.append({"stage": "sweep", "code": "E_CONFIG", "hard": False,
                      "message": "a sweep needs regions.N_A"})
    return _finish(doc, diags)


def _finish(doc, diags):
    doc["diagnostics"] = diags
    if any(d["hard"] for d in diags):
        doc["status"] = "failed"
    elif diags:
        doc["status"] = "partial"
    else:
        doc["status"] = "ok"
    return doc


def exit_code(doc):
    return 1 if doc["status"] == "failed" else 0


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _stem(path):
    root, ext = os.path.splitext(path)
    return root if ext.lower() == ".json" else path


def witness_rows(doc, name):
    """CSV rows ``step, slice, cell_i..., lower_i..., upper_i...`` for one witness."""
    g = doc["scenario"]["grid"]
    lower, upper, div = g["lower"], g["upper"], g["divisions"]
    h = [(u - l) / n for l, u, n in zip(lower, upper, div)]
    rows = []
    for step, (k, cell) in enumerate(doc["witnesses"][name]["cells"]):
        lo = [repr(round(l + i * s, 12)) for l, i, s in zip(lower, cell, h)]
        hi = [repr(round(l + (i + 1) * s, 12)) for l, i, s in zip(lower, cell, h)]
        rows.append([step, k, *cell, *lo, *hi])
    return rows


def emit_report(doc, path, witness_csv=None, betti_csv=None):
    """Write the JSON report and the optional CSVs; returns the written paths.

    The CSV switches default to the ``output`` section echoed in the report.
    Witness CSVs go to ``<stem>.witness-<name>.csv``, one row per path step;
    Betti curves to ``<stem>.betti.csv``.
    """
    out = doc["scenario"].get("output", {})
    if witness_csv is None:
        witness_csv = out.get("emit_witness_csv", False)
    if betti_csv is None:
        betti_csv = out.get("emit_betti_csv", False)
    written = [path]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(doc))
    stem = _stem(path)
    d = len(doc["scenario"]["grid"]["lower"])
    if witness_csv:
        header = ["step", "slice", *(f"cell_{i}" for i in range(d)),
                  *(f"lower_{i}" for i in range(d)), *(f"upper_{i}" for i in range(d))]
        for name, w in sorted(doc["witnesses"].items()):
            if w is None:
                continue
            p = f"{stem}.witness-{name}.csv"
            with open(p, "w", encoding="utf-8", newline="") as fh:
                wr = csv.writer(fh, lineterminator="\n")
                wr.writerow(header)
                wr.writerows(witness_rows(doc, name))
            written.append(p)
    if betti_csv and doc["betti"]:
        top = max(len(r["ranks"]) for c in doc["betti"].values() for r in c)
        p = f"{stem}.betti.csv"
        with open(p, "w", encoding="utf-8", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["pair", "slice", *(f"b{i}" for i in range(top))])
            for pair, curve in sorted(doc["betti"].items()):
                for r in curve:
                    wr.writerow([pair, r["slice"], *r["ranks"]])
        written.append(p)
    return written
