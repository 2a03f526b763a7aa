"""Command line entry point: ``conley run|validate|homology|sweep``.

Exit codes: 0 success, 1 pipeline error, 2 configuration error.
``--config builtin:<name>`` loads one of the bundled scenarios.
"""
import argparse
import json
import sys
from importlib import resources

from .config import parse_config
from .dynamics import build_transition_graph, thread_cap
from .errors import ConfigError, ConleyError
from .index.limit import slice_pair_homology
from .pairs import build_index_pair, build_index_triple, thicken_exit, thicken_triple
from .report import dumps, emit_report, exit_code, run_scenario

BUILTIN = "builtin:"


def bundled_scenarios():
    names = [p.name for p in resources.files("conley.scenarios").iterdir()]
    return sorted(n[:-5] for n in names if n.endswith(".json"))


def read_config_text(ref):
    if ref.startswith(BUILTIN):
        name = ref[len(BUILTIN):]
        if name not in bundled_scenarios():
            raise ConfigError([f"unknown bundled scenario {name!r}; "
                               f"available: {', '.join(bundled_scenarios())}"])
        return resources.files("conley.scenarios").joinpath(name + ".json").read_text("utf-8")
    try:
        with open(ref, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError([f"cannot read config: {exc}"]) from None


def _load(ref):
    return parse_config(read_config_text(ref))


def _summary(doc):
    idx = doc["index"] or {}
    lines = [f"status: {doc['status']}",
             f"conley index ranks: {idx.get('ranks')} (k0 = {idx.get('k0')})"]
    if doc["boundary_ranks"] is not None:
        lines.append(f"connecting homomorphism ranks: {doc['boundary_ranks']}")
    if doc["connectedness"] is not None:
        lines.append(f"verdict: {doc['connectedness']['verdict']}")
    for d in doc["diagnostics"]:
        lines.append(f"{d['code']} [{d['stage']}]: {d['message']}")
    return "\n".join(lines)


def cmd_validate(args):
    _load(args.config)
    print("config is valid")
    return 0


def cmd_run(args):
    cfg = _load(args.config)
    doc = run_scenario(cfg, threads=args.threads)
    for p in emit_report(doc, args.out or cfg.output.path):
        print(f"wrote {p}")
    print(_summary(doc))
    return exit_code(doc)


def cmd_sweep(args):
    cfg = _load(args.config)
    if args.amplitudes is not None:
        cfg.sweep = args.amplitudes
    if cfg.sweep is None:
        raise ConfigError(["sweep.amplitudes is required (or pass --amplitudes)"])
    if cfg.regions.get("N_A") is None:
        raise ConfigError(["regions.N_A is required for a sweep"])
    doc = run_scenario(cfg, threads=args.threads)
    if args.out:
        emit_report(doc, args.out)
    print(json.dumps(doc["sweep"], sort_keys=True, indent=2))
    return exit_code(doc)


def cmd_homology(args):
    cfg = _load(args.config)
    if not 0 <= args.slice <= cfg.time.slices:
        raise ConfigError([f"--slice must lie in 0..{cfg.time.slices}"])
    grid = cfg.grid.build()
    G = build_transition_graph(cfg.vector_field(), grid, cfg.time.tau, cfg.time.slices,
                               cfg.grid.padding, cfg.time.substeps, threads=args.threads)
    N = cfg.region("N", grid)
    ring, m, k = cfg.homology.ring, cfg.homology.thickening_m, args.slice
    pairs = {"index_pair": thicken_exit(build_index_pair(N, G, cfg.time.margin), m)}
    if cfg.regions.get("N_A") is not None:
        T = thicken_triple(build_index_triple(N, cfg.region("N_A", grid), G, cfg.time.margin), m)
        pairs.update(attractor=T.attractor, repeller=T.repeller, total=T.outer)
    out = {}
    for name, P in pairs.items():
        h = slice_pair_homology(P, k, ring)
        out[name] = {"ranks": list(h.ranks), "generators": [len(g) for g in h.generators]}
        if ring == "Z":
            out[name]["torsion"] = [list(t) for t in h.torsion]
    print(dumps({"slice": k, "ring": ring, "pairs": out}), end="")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="conley", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True,
                        help="scenario JSON file, or builtin:<name> "
                             f"({', '.join(bundled_scenarios())})")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker cap (default: CONLEY_THREADS or 1)")

    sp = sub.add_parser("run", help="run the full pipeline and write the report")
    common(sp)
    sp.add_argument("--out", help="report path (default: output.path of the config)")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("validate", help="parse and validate a config only")
    sp.add_argument("--config", required=True)
    sp.set_defaults(func=cmd_validate, threads=None)

    sp = sub.add_parser("homology", help="slice homology of the index pairs at one slice")
    common(sp)
    sp.add_argument("--slice", type=int, required=True)
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("sweep", help="perturbation sweep over forcing amplitudes")
    common(sp)
    sp.add_argument("--amplitudes", type=float, nargs="+", default=None)
    sp.add_argument("--out", help="also write the full report here")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads is None:
        args.threads = thread_cap()
    try:
        return args.func(args)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return 2
    except ConleyError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(exc, file=sys.stderr)
        return 1
    except Exception as exc:  # never crash with a traceback
        print(f"E_INTERNAL: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
