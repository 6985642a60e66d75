"""Command line entry point: ``cylink <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import invariants, learn, links, pipeline, symreg
from .algebra import Polynomial
from .groebner import Budget, GroebnerTimeout


def _weights(text: str) -> tuple:
    try:
        w = tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from None
    if len(w) != 5:
        raise argparse.ArgumentTypeError("need five comma-separated weights")
    return w


def _budget(args) -> Budget:
    return Budget(max_seconds=args.budget)


def _emit(obj, args) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(json.dumps(obj, indent=2, default=_jsonable) + "\n")
    else:
        print(json.dumps(obj, indent=2, default=_jsonable))


def _jsonable(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, tuple)):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _polynomial(args, ws):
    """Polynomial from --poly JSON, else the screened member for --seed."""
    if getattr(args, "poly", None):
        obj = json.loads(Path(args.poly).read_text())
        return Polynomial.from_json(obj, ws.order()), None
    cand = links.sample_smooth_polynomial(ws, args.seed, budget=_budget(args))
    return cand.polynomial(), cand


def _milnor(args):
    ws = links.validate_weight_system(args.weights)
    f, _ = _polynomial(args, ws)
    G, sms = invariants.milnor_basis(f, ws, pipeline.parse_field(args.field),
                                     pipeline.parse_order(args.order, ws.w), _budget(args))
    return ws, f, G, sms


# --------------------------------------------------------------------------
# subcommands


def cmd_basis(args) -> int:
    ws = links.validate_weight_system(args.weights)
    basis = links.monomial_basis(ws)
    if args.json:
        _emit({"weights": ws.w, "degree": ws.d, "monomials": basis}, args)
    else:
        print(f"# {len(basis)} monomials of degree {ws.d}")
        for m in basis:
            print(" ".join(map(str, m)))
    return 0


def cmd_sample(args) -> int:
    ws = links.validate_weight_system(args.weights)
    cand = links.sample_smooth_polynomial(ws, args.seed, budget=_budget(args))
    _emit(cand.to_json(), args)
    return 0


def cmd_groebner(args) -> int:
    ws, f, G, sms = _milnor(args)
    row = {"weights": list(ws.w), "p": G.field.modulus, "order": str(G.order),
           "length": G.length, "standard_monomial_count": sms.total,
           "elapsed_ms": round(1000 * G.stats.elapsed, 3), "status": "ok"}
    if args.full:
        row["basis"] = G.to_json()
    _emit(row, args)
    return 0


def cmd_hodge(args) -> int:
    ws, f, G, sms = _milnor(args)
    h = invariants.sasakian_hodge(f, ws, sms)
    _emit({"weights": list(ws.w), "h30": h.h30, "h21": h.h21, "b3": h.b3}, args)
    return 0


def cmd_cn(args) -> int:
    ws, f, G, sms = _milnor(args)
    sig = invariants.classify_signature(sms.monomials, ws)
    cn = invariants.cn_from_signature(sig, invariants.milnor_number(ws))
    _emit({"weights": list(ws.w), "nu": cn.nu, "raw": cn.raw, "mu": sig.mu,
           "mu_plus": sig.mu_plus, "mu_zero": sig.mu_zero, "mu_minus": sig.mu_minus}, args)
    return 0


def cmd_batch(args) -> int:
    m = pipeline.run_batch(args.weights_file, args.out_dir, args.workers, _budget(args),
                           args.seed, field=args.field or "gf",
                           order=args.order or "wdegrevlex", include_hard=args.include_hard,
                           timings=args.timings)
    counts: dict = {}
    for s in m.statuses.values():
        counts[s] = counts.get(s, 0) + 1
    print(json.dumps({"computed": m.computed, "statuses": counts,
                      "skipped_hard": m.skipped_hard, "exit_code": m.exit_code}))
    return m.exit_code


def cmd_check_weak_r(args) -> int:
    ws = links.validate_weight_system(args.weights)
    rep = invariants.weak_r_equivalence_campaign(
        ws, args.perms, args.polys, (args.lo, args.hi), args.seed, budget=_budget(args),
        workers=args.workers)
    summary = {k: v for k, v in rep.to_json().items() if k != "cells"}
    if args.cells:
        summary["cells"] = rep.to_json()["cells"]
    _emit(summary, args)
    return 0 if rep.invariants_agree and not rep.failures else 2


def cmd_ingest(args) -> int:
    t = pipeline.ingest_external(args.csv, args.kind)
    print(json.dumps({"kind": t.kind, "rows": len(t), "source": t.source}))
    return 0


def cmd_conjecture(args) -> int:
    recs = pipeline.load_records(args.records)
    cy = pipeline.ingest_external(args.cy, "cy_hodge")
    rep = pipeline.conjecture_check(recs, cy)
    out = rep.to_json()
    if not args.rows:
        out.pop("rows")
    _emit(out, args)
    return 0 if rep.holds else 2


def _train_cfg(args) -> learn.TrainConfig:
    return learn.TrainConfig(lr=args.lr, epochs=args.epochs, batch_size=args.batch_size,
                             seed=args.seed)


def cmd_train(args) -> int:
    recs = pipeline.load_records(args.records)
    X, y = pipeline.dataset_arrays(recs, args.target)
    cfg = _train_cfg(args)
    rep = learn.cross_validate(X, cfg, args.folds, y=y, workers=args.workers)
    print(f"{args.target}: {rep.summary()}")
    if args.report:
        Path(args.report).write_text(json.dumps(rep.to_json(), indent=2))
    if args.model:
        model = learn.train(learn.MLPModel.init(args.seed), X, cfg, y=y)
        model.save(args.model)
    return 0


def cmd_symreg(args) -> int:
    recs = pipeline.load_records(args.records)
    X, y = pipeline.dataset_arrays(recs, args.target)
    cfg = symreg.GPConfig(population=args.population, generations=args.generations,
                          parsimony=args.parsimony, seed=args.seed)
    ranked = symreg.evolve(X, cfg, y=y, top=args.top)
    for s in ranked:
        mark = "*" if s.pareto else " "
        print(f"{mark} size={s.size:3d} train_mae={s.train_mae:.4g} "
              f"val_mae={s.val_mae:.4g}  {s.expr.to_infix()}")
    if args.out:
        Path(args.out).write_text(symreg.dumps(ranked))
    return 0


def cmd_predict(args) -> int:
    models = {}
    if args.gb_model:
        models["gb_length"] = learn.MLPModel.load(args.gb_model)
    if args.h21_model:
        models["h21"] = learn.MLPModel.load(args.h21_model)
    cy = pipeline.ingest_external(args.cy, "cy_hodge") if args.cy else None
    weights = args.weights or list(pipeline.HARD_LIST)
    rows = pipeline.predict_remaining(models, weights, cy)
    print("weights              gbl_nn  h21_nn  h21_sr  h21_cy")
    for r in rows:
        cells = [r["gb_length_nn"], r["h21_nn"], r["h21_sr"], r["h21_cy"]]
        print(f"{str(tuple(r['w'])):20s} " + " ".join(f"{'-' if c is None else c:>7}" for c in cells)
              + ("  BOUND VIOLATED" if r["violates_bound"] else ""))
    if args.out:
        Path(args.out).write_text(json.dumps(rows, indent=2))
    return 0


def cmd_plots(args) -> int:
    recs = pipeline.load_records(args.records)
    cy = pipeline.ingest_external(args.cy, "cy_hodge") if args.cy else None
    files = pipeline.emit_plots(recs, args.out_dir, cy)
    for f in files:
        print(f)
    return 0


# --------------------------------------------------------------------------
# parser


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Flags accepted before or after the subcommand."""
    def d(v):
        return argparse.SUPPRESS if suppress else v

    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=d(0))
    g.add_argument("--field", default=d(None),
                   help="gf (GF(32003), default), gf:<p> or qq")
    g.add_argument("--order", default=d(None),
                   help="wdegrevlex (default), wdeglex, degrevlex, deglex or lex; "
                        "the w prefix grades by the weights")
    g.add_argument("--workers", type=int, default=d(1))
    g.add_argument("--budget", type=float, default=d(pipeline.DEFAULT_TASK_SECONDS),
                   help="wall-clock seconds per Groebner computation")
    g.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = argparse.ArgumentParser(prog="cylink", parents=[_global_flags(False)],
                                description="Invariants of Calabi-Yau links from weight systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    def with_weights(sp, poly=True):
        sp.add_argument("weights", type=_weights, help="e.g. 22,29,49,50,75")
        if poly:
            sp.add_argument("--poly", help="polynomial JSON instead of sampling")
        sp.add_argument("--out", help="write JSON here instead of stdout")

    sp = add("basis", cmd_basis, "degree-d monomial basis")
    with_weights(sp, poly=False)
    sp.add_argument("--json", action="store_true")

    with_weights(add("sample", cmd_sample, "screened smooth member"), poly=False)

    sp = add("groebner", cmd_groebner, "Groebner basis of the Jacobian ideal")
    with_weights(sp)
    sp.add_argument("--full", action="store_true", help="include the basis elements")

    with_weights(add("hodge", cmd_hodge, "Sasakian Hodge numbers"))
    with_weights(add("cn", cmd_cn, "CN invariant and Steenbrink counts"))

    sp = add("batch", cmd_batch, "resumable batch over a weight file")
    sp.add_argument("weights_file")
    sp.add_argument("out_dir")
    sp.add_argument("--include-hard", action="store_true")
    sp.add_argument("--timings", action="store_true",
                    help="store elapsed times (records stop being reproducible byte for byte)")

    sp = add("check-weak-r", cmd_check_weak_r, "invariants across permutations and coefficients")
    with_weights(sp, poly=False)
    sp.add_argument("--perms", type=int, default=10)
    sp.add_argument("--polys", type=int, default=50)
    sp.add_argument("--lo", type=int, default=invariants.CAMPAIGN_POOL[0])
    sp.add_argument("--hi", type=int, default=invariants.CAMPAIGN_POOL[1])
    sp.add_argument("--cells", action="store_true", help="include every sample")

    sp = add("ingest", cmd_ingest, "validate an external CSV")
    sp.add_argument("csv")
    sp.add_argument("--kind", choices=("cy_hodge", "published_invariants"), default="cy_hodge")

    sp = add("conjecture", cmd_conjecture, "h21 bound against CY Hodge numbers")
    sp.add_argument("records")
    sp.add_argument("cy")
    sp.add_argument("--rows", action="store_true")
    sp.add_argument("--out")

    sp = add("train", cmd_train, "cross-validated regressor on a record CSV")
    sp.add_argument("records")
    sp.add_argument("--target", choices=("h21", "gb_length"), default="h21")
    sp.add_argument("--folds", type=int, default=5)
    sp.add_argument("--epochs", type=int, default=500)
    sp.add_argument("--lr", type=float, default=1e-3)
    sp.add_argument("--batch-size", type=int, default=32)
    sp.add_argument("--model", help="also fit on all rows and save the checkpoint here")
    sp.add_argument("--report", help="write the cross-validation report here")

    sp = add("symreg", cmd_symreg, "genetic-programming search on a record CSV")
    sp.add_argument("records")
    sp.add_argument("--target", choices=("h21", "gb_length"), default="h21")
    sp.add_argument("--population", type=int, default=1000)
    sp.add_argument("--generations", type=int, default=40)
    sp.add_argument("--parsimony", type=float, default=symreg.GPConfig.parsimony)
    sp.add_argument("--top", type=int, default=10)
    sp.add_argument("--out")

    sp = add("predict", cmd_predict, "predictions for uncomputed systems")
    sp.add_argument("weights", type=_weights, nargs="*")
    sp.add_argument("--gb-model")
    sp.add_argument("--h21-model")
    sp.add_argument("--cy", help="CY Hodge CSV for the bound check")
    sp.add_argument("--out")

    sp = add("plots", cmd_plots, "histogram and scatter data with SVG figures")
    sp.add_argument("records")
    sp.add_argument("out_dir")
    sp.add_argument("--cy")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with warnings.catch_warnings():
            if not args.verbose:
                warnings.simplefilter("ignore", invariants.HodgeWarning)
            return args.func(args)
    except GroebnerTimeout as e:
        print(f"cylink: {e}", file=sys.stderr)
        return pipeline.EXIT_PARTIAL
    except (ValueError, RuntimeError, OSError, ArithmeticError) as e:
        print(f"cylink: {e}", file=sys.stderr)
        return pipeline.EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
