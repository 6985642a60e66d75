"""Batch runs, external data ingestion, conjecture checks and plot data.

A batch writes three things into its output directory:

``journal.jsonl``
    Append-only, one JSON line per finished weight system. This is the
    resumption state: systems already journaled are never recomputed.
``invariants.csv``
    The dataset, regenerated from the journal in input order.
``candidates.jsonl``
    The accepted polynomial for every system that got one.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import resource
import warnings
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .algebra import DEFAULT_PRIME, GF, QQ, CoefficientField, MonomialOrder
from .groebner import Budget, GroebnerError, GroebnerTimeout
from .invariants import INVARIANT_COLUMNS, InvariantError, compute_invariants, milnor_number
from .learn import MLPModel, features, pmcc
from .links import (
    NoSmoothMember,
    WeightSystemError,
    sample_smooth_polynomial,
    validate_weight_system,
)
from .symreg import paper_formula_h21

logger = logging.getLogger(__name__)

HARD_LIST = (
    (1, 1, 8, 19, 28),
    (1, 1, 9, 21, 32),
    (1, 1, 11, 26, 39),
    (1, 1, 12, 28, 42),
    (1, 6, 34, 81, 122),
    (1, 6, 40, 93, 140),
)
# CY h21 of the hard-list systems, the bound their Sasakian h21 should obey
HARD_LIST_CY_H21 = dict(zip(HARD_LIST, (348, 387, 462, 491, 246, 275)))

DEFAULT_TASK_SECONDS = 600.0
DEFAULT_TASK_BYTES = 4 << 30

EXIT_OK, EXIT_FATAL, EXIT_PARTIAL = 0, 1, 2

RECORD_COLUMNS = INVARIANT_COLUMNS + ("stage", "seed", "resamples", "screen_prime", "message")


class PipelineError(RuntimeError):
    pass


class IngestError(ValueError):
    def __init__(self, msg: str, rows: list | None = None):
        super().__init__(msg)
        self.rows = rows or []


def canonical_key(w: Sequence[int]) -> tuple:
    return tuple(sorted(int(x) for x in w))


def task_seed(seed: int, w: Sequence[int]) -> int:
    """Per-system seed derived from the global seed and the weights only."""
    return int(np.random.SeedSequence([int(seed), *map(int, w)]).generate_state(1)[0])


def parse_field(spec: str | None) -> CoefficientField:
    """``"qq"``, ``"gf"`` (32003) or ``"gf:<p>"`` / a bare prime."""
    if spec is None or spec == "gf":
        return GF(DEFAULT_PRIME)
    if spec == "qq":
        return QQ
    if spec.startswith("gf:"):
        spec = spec[3:]
    return GF(int(spec))


def parse_order(spec: str | None, w: Sequence[int]) -> MonomialOrder:
    """``w``-prefixed kinds use the weight grading, bare kinds the standard one."""
    spec = spec or "wdegrevlex"
    if spec.startswith("w"):
        return MonomialOrder(spec[1:], tuple(w))
    return MonomialOrder(spec)


# --------------------------------------------------------------------------
# weight files


def read_weights_file(path) -> list[tuple[tuple, int | None]]:
    """Rows ``w1..w5[,h21_cy]``; a non-numeric first row is taken as a header."""
    out = []
    try:
        fh = open(path, newline="")
    except OSError as e:
        raise PipelineError(f"cannot read {path}: {e}") from e
    with fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            row = [c.strip() for c in row if c.strip() != ""]
            if not row or row[0].startswith("#"):
                continue
            try:
                vals = [int(c) for c in row]
            except ValueError:
                if lineno == 1:
                    continue
                raise PipelineError(f"{path}:{lineno}: non-integer field in {row}") from None
            if len(vals) not in (5, 6):
                raise PipelineError(f"{path}:{lineno}: expected 5 or 6 fields, got {len(vals)}")
            out.append((tuple(vals[:5]), vals[5] if len(vals) == 6 else None))
    return out


def write_weights_file(path, weights: Iterable[Sequence[int]]) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["w1", "w2", "w3", "w4", "w5"])
        for w in weights:
            wr.writerow(list(w))


# --------------------------------------------------------------------------
# one system


@dataclass(frozen=True)
class TaskSpec:
    w: tuple
    seed: int
    field: str = "gf"
    order: str = "wdegrevlex"
    budget: Budget = dc_field(default_factory=lambda: Budget(max_seconds=DEFAULT_TASK_SECONDS))
    timings: bool = False


def _empty_record(w, seed) -> dict:
    rec = {c: None for c in RECORD_COLUMNS}
    rec.update(zip(("w1", "w2", "w3", "w4", "w5"), w))
    rec["d"] = sum(w)
    rec["seed"] = seed
    return rec


def process_system(task: TaskSpec) -> tuple[dict, dict | None]:
    """Sample, screen and compute invariants for one weight system.

    Returns ``(record, candidate_json)``. Failures become records with
    status ``timeout`` or ``error`` and the stage they stopped in.
    """
    rec = _empty_record(task.w, task.seed)
    try:
        ws = validate_weight_system(task.w)
    except WeightSystemError as e:
        rec.update(status="error", stage="validate", message=str(e))
        return rec, None
    rec["stage"] = "sample"
    try:
        cand = sample_smooth_polynomial(ws, task.seed, budget=task.budget)
    except NoSmoothMember as e:
        rec.update(status="error", message=str(e), resamples=e.screening["resamples"])
        return rec, None
    except GroebnerTimeout as e:
        rec.update(status="timeout", message=e.reason)
        return rec, None
    rec["resamples"] = cand.screening["resamples"]
    rec["screen_prime"] = cand.screening["prime"]
    rec["stage"] = "invariants"
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            inv = compute_invariants(cand.polynomial(), ws, parse_field(task.field),
                                     parse_order(task.order, ws.w), task.budget)
    except GroebnerTimeout as e:
        rec.update(status="timeout", message=e.reason)
        return rec, cand.to_json()
    except (InvariantError, GroebnerError) as e:
        rec.update(status="error", message=str(e))
        return rec, cand.to_json()
    row = inv.to_row()
    if not task.timings:
        row["elapsed_gb_ms"] = row["elapsed_inv_ms"] = None
    rec.update(row)
    rec["stage"] = "done"
    if rec["h30"] != 1:
        rec["message"] = f"h30 = {rec['h30']}"
    return rec, cand.to_json()


def _limit_memory(nbytes: int | None):
    if nbytes:
        try:
            resource.setrlimit(resource.RLIMIT_AS, (nbytes, nbytes))
        except (ValueError, OSError):
            logger.warning("could not cap worker memory")


def _guarded(task: TaskSpec):
    try:
        return process_system(task)
    except MemoryError:
        rec = _empty_record(task.w, task.seed)
        rec.update(status="timeout", stage="invariants", message="memory cap")
        return rec, None


# --------------------------------------------------------------------------
# journal


class Journal:
    """Append-only JSON-lines file; a torn last line is dropped on load."""

    def __init__(self, path):
        self.path = Path(path)

    def load(self) -> dict:
        done: dict = {}
        if not self.path.exists():
            return done
        good = 0
        with open(self.path, "rb") as fh:
            data = fh.read()
        for line in data.splitlines(keepends=True):
            if not line.endswith(b"\n"):
                break
            try:
                entry = json.loads(line)
            except json.JSONDecodeError:
                break
            done[tuple(entry["w"])] = entry
            good += len(line)
        if good != len(data):
            logger.warning("dropping %d bytes of torn journal tail", len(data) - good)
            with open(self.path, "r+b") as fh:
                fh.truncate(good)
        return done

    def append(self, entry: dict) -> None:
        line = json.dumps(entry, sort_keys=True) + "\n"
        with open(self.path, "a") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())


@dataclass
class BatchManifest:
    weights_file: str
    out_dir: str
    seed: int
    budget: dict
    field: str
    order: str
    statuses: dict  # "w1,..,w5" -> status
    computed: int  # systems computed in this invocation
    skipped_hard: list

    @property
    def exit_code(self) -> int:
        return EXIT_OK if all(s == "ok" for s in self.statuses.values()) else EXIT_PARTIAL

    def to_json(self) -> dict:
        out = asdict(self)
        out["exit_code"] = self.exit_code
        return out


def _fmt(v) -> str:
    return "" if v is None else str(v)


def write_records_csv(path, records: list[dict], columns: Sequence[str] = RECORD_COLUMNS) -> None:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(columns)
    for r in records:
        wr.writerow([_fmt(r.get(c)) for c in columns])
    Path(path).write_text(buf.getvalue())


def run_batch(weights_file, out_dir, workers: int = 1, per_task_budget: Budget | None = None,
              seed: int = 0, *, field: str = "gf", order: str = "wdegrevlex",
              include_hard: bool = False, timings: bool = False,
              memory_cap: int | None = DEFAULT_TASK_BYTES,
              weights: Sequence[Sequence[int]] | None = None) -> BatchManifest:
    """Compute invariants for every system in ``weights_file``, resumably.

    Completed systems found in the journal are not recomputed. Workers hand
    finished records back to this process, which is the only writer.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as e:
        raise PipelineError(f"cannot write to {out}: {e}") from e
    rows = [(tuple(w), None) for w in weights] if weights is not None \
        else read_weights_file(weights_file)
    budget = per_task_budget or Budget(max_seconds=DEFAULT_TASK_SECONDS)

    todo_w, skipped, seen = [], [], set()
    for w, _ in rows:
        if w in seen:
            continue
        seen.add(w)
        if not include_hard and canonical_key(w) in HARD_LIST:
            skipped.append(list(w))
            continue
        todo_w.append(w)

    journal = Journal(out / "journal.jsonl")
    done = journal.load()
    tasks = [TaskSpec(w, task_seed(seed, w), field, order, budget, timings)
             for w in todo_w if w not in done]
    logger.info("%d systems, %d journaled, %d to compute", len(todo_w), len(done), len(tasks))

    def record(task, result):
        rec, cand = result
        entry = {"w": list(task.w), "record": rec, "candidate": cand}
        journal.append(entry)
        done[task.w] = entry

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=_limit_memory,
                                 initargs=(memory_cap,)) as ex:
            futs = {ex.submit(_guarded, t): t for t in tasks}
            for fut in as_completed(futs):
                record(futs[fut], fut.result())
    else:
        for t in tasks:
            record(t, _guarded(t))

    records = [done[w]["record"] for w in todo_w]
    write_records_csv(out / "invariants.csv", records)
    with open(out / "candidates.jsonl", "w") as fh:
        for w in todo_w:
            cand = done[w].get("candidate")
            if cand is not None:
                fh.write(json.dumps(cand, sort_keys=True) + "\n")
    manifest = BatchManifest(
        str(weights_file), str(out), seed, asdict(budget), field, order,
        {",".join(map(str, w)): done[w]["record"]["status"] for w in todo_w},
        len(tasks), skipped)
    (out / "manifest.json").write_text(json.dumps(manifest.to_json(), indent=2, sort_keys=True))
    return manifest


# --------------------------------------------------------------------------
# records and external tables


_INT_COLUMNS = {"w1", "w2", "w3", "w4", "w5", "d", "gb_length", "mu", "mu_plus", "mu_zero",
                "mu_minus", "h30", "h21", "b3", "nu", "seed", "resamples", "screen_prime"}


def _convert(col: str, v: str):
    if v == "":
        return None
    if col in _INT_COLUMNS:
        return int(v)
    if col.startswith("elapsed"):
        return float(v)
    return v


def load_records(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: _convert(k, v) for k, v in row.items()} for row in csv.DictReader(fh)]


def ok_records(records: Iterable[dict]) -> list[dict]:
    return [r for r in records if r.get("status", "ok") == "ok"]


@dataclass
class ExternalTable:
    kind: str
    rows: dict  # canonical key -> value (int for cy_hodge, dict otherwise)
    source: str = ""

    def __len__(self):
        return len(self.rows)

    def __contains__(self, w):
        return canonical_key(w) in self.rows

    def __getitem__(self, w):
        return self.rows[canonical_key(w)]

    def get(self, w, default=None):
        return self.rows.get(canonical_key(w), default)


_PUBLISHED_REQUIRED = ("w1", "w2", "w3", "w4", "w5", "h21")


def ingest_external(csv_path, kind: str) -> ExternalTable:
    """Load CY Hodge numbers or a published invariant table, keyed by sorted weights.

    ``cy_hodge`` rows are ``w1..w5,h21_cy`` (header optional).
    ``published_invariants`` needs a header containing at least
    ``w1..w5,h21``; other invariant columns are kept when present.
    """
    if kind not in ("cy_hodge", "published_invariants"):
        raise IngestError(f"unknown table kind {kind!r}")
    with open(csv_path, newline="") as fh:
        rows = [r for r in csv.reader(fh)]
    rows = [(i, [c.strip() for c in r]) for i, r in enumerate(rows, 1)
            if r and any(c.strip() for c in r)]
    table: dict = {}
    origin: dict = {}
    problems = []
    if not rows:
        warnings.warn(f"{csv_path} is empty", stacklevel=2)
        return ExternalTable(kind, {}, str(csv_path))
    if kind == "cy_hodge":
        if not rows[0][1][0].lstrip("-").isdigit():
            rows = rows[1:]
        for lineno, r in rows:
            try:
                vals = [int(c) for c in r]
            except ValueError:
                problems.append((lineno, f"non-integer field in {r}"))
                continue
            if len(vals) != 6:
                problems.append((lineno, f"expected 6 fields, got {len(vals)}"))
                continue
            if min(vals[:5]) < 1 or vals[5] < 0:
                problems.append((lineno, f"invalid values {vals}"))
                continue
            key = canonical_key(vals[:5])
            if key in table:
                problems.append((lineno, f"duplicate weights {key}, first seen on row {origin[key]}"))
                continue
            table[key], origin[key] = vals[5], lineno
    else:
        header = rows[0][1]
        missing = [c for c in _PUBLISHED_REQUIRED if c not in header]
        if missing:
            raise IngestError(f"{csv_path}: header lacks {missing}", [(rows[0][0], header)])
        for lineno, r in rows[1:]:
            if len(r) != len(header):
                problems.append((lineno, f"expected {len(header)} fields, got {len(r)}"))
                continue
            try:
                rec = {k: _convert(k, v) for k, v in zip(header, r)}
            except ValueError as e:
                problems.append((lineno, str(e)))
                continue
            w = [rec[c] for c in ("w1", "w2", "w3", "w4", "w5")]
            if any(x is None or x < 1 for x in w) or rec["h21"] is None:
                problems.append((lineno, f"invalid weights or h21 in {r}"))
                continue
            key = canonical_key(w)
            if key in table:
                problems.append((lineno, f"duplicate weights {key}, first seen on row {origin[key]}"))
                continue
            table[key], origin[key] = rec, lineno
    if problems:
        detail = "; ".join(f"row {n}: {m}" for n, m in problems[:10])
        raise IngestError(f"{csv_path}: {len(problems)} bad rows: {detail}", problems)
    return ExternalTable(kind, table, str(csv_path))


# --------------------------------------------------------------------------
# conjecture check


@dataclass
class ConjectureReport:
    rows: list  # (key, h_s, h_cy, holds, equal)
    n: int
    violations: int
    equalities: int
    missing: list
    pmcc: float | None

    @property
    def holds(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        out = asdict(self)
        out["holds"] = self.holds
        return out


def conjecture_check(records: Iterable[dict], cy: ExternalTable) -> ConjectureReport:
    """Compare computed h21 with the CY h21 of the same weights."""
    rows, missing = [], []
    for r in ok_records(records):
        w = tuple(r[c] for c in ("w1", "w2", "w3", "w4", "w5"))
        h_cy = cy.get(w)
        if h_cy is None:
            missing.append(list(canonical_key(w)))
            continue
        if isinstance(h_cy, dict):
            h_cy = h_cy["h21"]
        h_s = int(r["h21"])
        rows.append((list(canonical_key(w)), h_s, int(h_cy), h_s <= h_cy, h_s == h_cy))
    corr = None
    if len(rows) >= 2:
        xs = [r[1] for r in rows]
        ys = [r[2] for r in rows]
        if np.std(xs) > 0 and np.std(ys) > 0:
            corr = pmcc(xs, ys)
    return ConjectureReport(rows, len(rows), sum(not r[3] for r in rows),
                            sum(r[4] for r in rows), missing, corr)


# --------------------------------------------------------------------------
# predictions


def predict_remaining(models: dict | None, weights: Sequence[Sequence[int]] = HARD_LIST,
                      cy: ExternalTable | dict | None = None) -> list[dict]:
    """Predicted gb_length and h21 for systems too expensive to compute.

    ``models`` maps ``"gb_length"`` and/or ``"h21"`` to trained
    :class:`MLPModel` instances; the formula column needs no model. ``cy``
    supplies CY h21 bounds (defaults to the known values for the hard list).
    """
    models = models or {}
    for k, m in models.items():
        if k not in ("gb_length", "h21"):
            raise PipelineError(f"unknown model target {k!r}")
        if not isinstance(m, MLPModel):
            raise PipelineError(f"model for {k} is not a trained regressor")
    if cy is None:
        cy = HARD_LIST_CY_H21
    out = []
    X = features(weights)
    preds = {k: m.predict(X) for k, m in models.items()}
    for i, w in enumerate(weights):
        key = canonical_key(w)
        sr = paper_formula_h21(key)
        bound = cy.get(key) if isinstance(cy, (dict, ExternalTable)) else None
        if isinstance(bound, dict):
            bound = bound["h21"]
        row = {
            "w": list(key),
            "gb_length_nn": int(round(float(preds["gb_length"][i]))) if "gb_length" in preds else None,
            "h21_nn": int(round(float(preds["h21"][i]))) if "h21" in preds else None,
            "h21_sr": int(round(sr)),
            "h21_sr_raw": sr,
            "h21_cy": bound,
        }
        row["violates_bound"] = bound is not None and any(
            v is not None and v > bound for v in (row["h21_nn"], row["h21_sr"]))
        out.append(row)
    return out


# --------------------------------------------------------------------------
# plot data


NU_BINS = tuple(range(1, 48, 2))


def histogram_counts(values: Sequence[int], bins: Sequence[int] | None = None) -> list[tuple]:
    vals = np.asarray(values, dtype=np.int64)
    if bins is None:
        u, c = np.unique(vals, return_counts=True)
        return list(zip(u.tolist(), c.tolist()))
    return [(b, int(np.sum(vals == b))) for b in bins]


def _write_pairs(path, header, pairs):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        wr.writerows(pairs)


def emit_plots(records: Iterable[dict], out_dir, cy: ExternalTable | None = None,
               predictions: dict | None = None) -> list[Path]:
    """CSV data plus SVG figures for the invariant distributions.

    ``predictions`` maps a label to ``(y_true, y_pred)`` for scatter plots.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    recs = ok_records(records)
    if not recs:
        raise PipelineError("no ok records to plot")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []

    def hist(name, col, bins=None, xlabel=None):
        data = histogram_counts([r[col] for r in recs], bins)
        p = out / f"{name}.csv"
        _write_pairs(p, [col, "count"], data)
        fig, ax = plt.subplots(figsize=(6, 4))
        xs, cs = zip(*data)
        ax.bar(xs, cs, width=1.6 if bins is NU_BINS else 0.8 * max(1, _step(xs)))
        ax.set_xlabel(xlabel or col)
        ax.set_ylabel("count")
        fig.tight_layout()
        fig.savefig(out / f"{name}.svg")
        plt.close(fig)
        files.extend([p, out / f"{name}.svg"])

    hist("gb_length_hist", "gb_length", xlabel="Groebner basis length")
    hist("h21_hist", "h21", xlabel="h21")
    hist("nu_hist", "nu", NU_BINS, xlabel="CN invariant")

    scatters = {}
    if cy is not None:
        rep = conjecture_check(recs, cy)
        if rep.rows:
            scatters["h21_sasakian_vs_cy"] = (
                ("h21_cy", "h21_sasakian"), [(r[2], r[1]) for r in rep.rows])
    for label, (yt, yp) in (predictions or {}).items():
        scatters[f"pred_{label}"] = (("true", "predicted"),
                                     list(zip(np.asarray(yt).tolist(), np.asarray(yp).tolist())))
    for name, (hdr, pairs) in scatters.items():
        p = out / f"{name}.csv"
        _write_pairs(p, hdr, pairs)
        fig, ax = plt.subplots(figsize=(5, 5))
        xs, ys = zip(*pairs)
        ax.scatter(xs, ys, s=6)
        lo, hi = min(min(xs), min(ys)), max(max(xs), max(ys))
        ax.plot([lo, hi], [lo, hi], lw=0.8, color="k")
        ax.set_xlabel(hdr[0])
        ax.set_ylabel(hdr[1])
        fig.tight_layout()
        fig.savefig(out / f"{name}.svg")
        plt.close(fig)
        files.extend([p, out / f"{name}.svg"])
    return files


def _step(xs) -> float:
    xs = sorted(set(xs))
    if len(xs) < 2:
        return 1.0
    return float(min(b - a for a, b in zip(xs, xs[1:])))


# --------------------------------------------------------------------------
# helpers for self-computed datasets


def random_weight_systems(n: int, max_degree: int = 100, max_mu: int = 20000,
                          seed: int = 0, exclude_hard: bool = True) -> list[tuple]:
    """``n`` distinct candidate systems drawn without replacement, seeded."""
    from .links import candidate_weight_systems

    pool = [w for w in candidate_weight_systems(max_degree, max_mu)
            if not (exclude_hard and w in HARD_LIST)]
    if n > len(pool):
        raise PipelineError(f"only {len(pool)} candidates available")
    idx = np.random.default_rng(seed).choice(len(pool), size=n, replace=False)
    return [pool[i] for i in sorted(idx.tolist())]


def milnor_check(records: Iterable[dict]) -> list[tuple]:
    """Systems whose computed standard-monomial total misses the product formula."""
    bad = []
    for r in ok_records(records):
        w = tuple(r[c] for c in ("w1", "w2", "w3", "w4", "w5"))
        if r["mu"] != milnor_number(w):
            bad.append((w, r["mu"]))
    return bad


def dataset_arrays(records: Iterable[dict], target: str) -> tuple[np.ndarray, np.ndarray]:
    recs = ok_records(records)
    W = np.array([[r[c] for c in ("w1", "w2", "w3", "w4", "w5")] for r in recs], dtype=float)
    y = np.array([r[target] for r in recs], dtype=float)
    if not np.isfinite(y).all():
        raise PipelineError(f"missing {target} values")
    return features(W), y

