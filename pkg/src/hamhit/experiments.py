"""Seeded Monte Carlo campaigns over the random subgraph process.

Trials are independent and seeded by ``mix(master_seed, index)``; workers
return results that are merged in trial order, so the records do not depend
on the worker count. Wall-clock timings are kept out of the records and
written to a separate file.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from .generators import GenSpec, counterexample_graph
from .graph import Graph, GraphInputError, count_edges, read_edge_list
from .hamilton.core import Status
from .hamilton.engine import Engine
from .hamilton.exact import exact_hamilton
from .hamilton.packing import IndeterminateError, pairwise_disjoint
from .process import EdgeProcess, hitting_hamiltonicity, hitting_min_degree, new_process, sample_gp, snapshot
from .seeding import mix
from .thresholds import mindeg_probability_report, sharp_threshold, tau2_window

EXPERIMENTS = ("hitting", "threshold", "counterexample", "k-disjoint")
Z95 = 1.959963984540054


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    base: Optional[dict] = None  # GenSpec fields
    graph_file: Optional[str] = None
    trials: int = 0
    k: int = 1
    p_grid: tuple = ()
    seed: int = 0
    engine: dict = field(default_factory=dict)
    workers: int = 1
    regenerate_base: bool = False
    permutations: Optional[str] = None  # "all": every edge order instead of random trials
    epsilon: float = 0.1
    confirm_max_n: int = 14
    search_on_failure: bool = True

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise GraphInputError(f"unknown experiment {self.experiment!r}")
        if self.trials < 0:
            raise GraphInputError("trials must be non-negative")
        if (self.base is None) == (self.graph_file is None):
            raise GraphInputError("give exactly one of base and graph_file")
        if self.k < 1:
            raise GraphInputError("k must be at least 1")
        grid = list(self.p_grid)
        if grid != sorted(grid) or any(not (0.0 <= p <= 1.0) for p in grid):
            raise GraphInputError("p_grid must be ascending within [0, 1]")
        if self.experiment == "threshold" and not grid:
            raise GraphInputError("threshold scan needs a p_grid")
        if self.regenerate_base and self.graph_file is not None:
            raise GraphInputError("cannot regenerate a base read from a file")
        if self.permutations not in (None, "all"):
            raise GraphInputError("permutations must be 'all' if given")
        if self.workers < 1:
            raise GraphInputError("workers must be at least 1")
        Engine(**self.engine)  # validate early
        if self.base is not None:
            GenSpec.from_dict(self.base)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        keys = set(cls.__dataclass_fields__)
        unknown = set(data) - keys
        if unknown:
            raise GraphInputError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if "p_grid" in data:
            data["p_grid"] = tuple(float(p) for p in data["p_grid"])
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise GraphInputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise GraphInputError("config must be a JSON object")
        return cls.from_dict(data)

    def spec(self) -> Optional[GenSpec]:
        return GenSpec.from_dict(self.base) if self.base is not None else None

    def base_graph(self) -> Graph:
        if self.graph_file is not None:
            return read_edge_list(self.graph_file)
        return self.spec().build()


def wilson(successes: int, total: int, z: float = Z95) -> Optional[tuple[float, float]]:
    """Wilson score interval for a binomial proportion."""
    if total <= 0:
        return None
    phat = successes / total
    den = 1 + z * z / total
    centre = (phat + z * z / (2 * total)) / den
    half = z * math.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total)) / den
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == total else min(1.0, centre + half)
    return lo, hi


# --- per-trial workers ------------------------------------------------------
# Workers read the config and base graph from module state set by _init_worker.

_SHARED: dict[str, Any] = {}


def _init_worker(cfg: ExperimentConfig, base: Graph) -> None:
    _SHARED["cfg"] = cfg
    _SHARED["base"] = base


def _trial_base(cfg: ExperimentConfig, base: Graph, seed: int) -> Graph:
    if not cfg.regenerate_base:
        return base
    spec = cfg.spec()
    return GenSpec.from_dict(dict(asdict(spec), seed=mix(seed, 1))).build()


def _low_at(proc: EdgeProcess, t: int) -> int:
    deg = np.zeros(proc.n, dtype=np.int64)
    e = proc._ordered[:t]
    np.add.at(deg, e[:, 0], 1)
    np.add.at(deg, e[:, 1], 1)
    return int((deg <= 1).sum())


def _hitting_one(job) -> dict:
    index, perm = job if isinstance(job, tuple) else (job, None)
    cfg, base = _SHARED["cfg"], _SHARED["base"]
    engine = Engine(**cfg.engine)
    if perm is not None:
        seed = None
        g = base
        proc = EdgeProcess(g, perm)
    else:
        seed = mix(cfg.seed, index)
        g = _trial_base(cfg, base, seed)
        proc = new_process(g, seed)
    rec = {"trial": index, "seed": seed, "e_base": g.m, "tau2": None, "tauhc": None,
           "coincide": None, "status": "ok", "lo": None, "hi": None, "low_at_p1": None}
    tau2 = hitting_min_degree(proc, 2)
    rec["tau2"] = tau2
    if tau2 is None:
        rec["status"] = "infeasible"
        return rec
    d = g.regular_degree()
    if d and g.n > d:
        p1 = tau2_window(g.n, d).p1
        rec["low_at_p1"] = _low_at(proc, int(round(p1 * g.m)))
    try:
        hc = hitting_hamiltonicity(proc, engine, 1, lower=tau2)
    except IndeterminateError as exc:
        rec.update(status="indeterminate", lo=exc.lo, hi=exc.hi)
        return rec
    rec["tauhc"] = hc
    if hc is None:
        rec["status"] = "base-not-hamiltonian"
        return rec
    assert hc >= tau2, (hc, tau2)
    rec["coincide"] = hc == tau2
    return rec


def _threshold_one(job: tuple[int, int, float]) -> dict:
    cfg, base = _SHARED["cfg"], _SHARED["base"]
    gi, trial, p = job
    engine = Engine(**cfg.engine)
    seed = mix(mix(cfg.seed, gi), trial)
    g = _trial_base(cfg, base, seed)
    h = sample_gp(g, p, seed)
    res = engine.solve(h, seed=seed & 0xFFFFFFFF)
    return {"grid": gi, "p": p, "trial": trial, "seed": seed, "edges": h.m, "found": res.status.to_json()}


def _counterexample_one(index: int) -> dict:
    cfg, _ = _SHARED["cfg"], _SHARED["base"]
    spec = cfg.spec()
    seed = mix(cfg.seed, index)
    comp = counterexample_graph(spec.n, spec.c, mix(seed, 1) if cfg.regenerate_base else spec.seed)
    g = comp.graph
    proc = new_process(g, seed)
    tau2 = hitting_min_degree(proc, 2)
    rec = {"trial": index, "seed": seed, "e_base": g.m, "tau2": tau2, "overlay_degree": comp.overlay_degree,
           "e_b": None, "bound": len(comp.part_b) - len(comp.part_a), "fired": None, "exact": "skipped"}
    if tau2 is None:
        rec["exact"] = "infeasible"
        return rec
    snap = snapshot(proc, tau2)
    eb = count_edges(snap, comp.part_b)
    rec["e_b"] = eb
    rec["fired"] = eb < rec["bound"]
    if rec["fired"] and g.n <= cfg.confirm_max_n:
        res = exact_hamilton(snap, budget=None)
        # a Hamilton cycle needs at least |B| - |A| edges inside B
        assert res.status is not Status.FOUND, "certificate fired on a Hamiltonian snapshot"
        rec["exact"] = res.status.value
    return rec


def _kdisjoint_one(index: int) -> dict:
    cfg, base = _SHARED["cfg"], _SHARED["base"]
    engine = Engine(**cfg.engine)
    seed = mix(cfg.seed, index)
    g = _trial_base(cfg, base, seed)
    proc = new_process(g, seed)
    k = cfg.k
    rec = {"trial": index, "seed": seed, "e_base": g.m, "k": k, "tau2k": None, "packed": None,
           "taukhc": None, "taukhc_upper": None, "coincide": None, "status": "ok"}
    t2k = hitting_min_degree(proc, 2 * k)
    rec["tau2k"] = t2k
    if t2k is None:
        rec["status"] = "infeasible"
        return rec
    res = engine.pack(snapshot(proc, t2k), k)
    if res.found:
        assert len(res.cycles) == k and pairwise_disjoint(res.cycles)
        rec.update(packed=True, taukhc=t2k, coincide=True)
        return rec
    rec["packed"] = False
    if res.status is Status.NONE:
        rec["coincide"] = False
        if cfg.search_on_failure and t2k < g.m:
            try:
                rec["taukhc"] = hitting_hamiltonicity(proc, engine, k, lower=t2k + 1)
            except IndeterminateError as exc:
                rec["status"] = "indeterminate"
                rec["taukhc_upper"] = exc.hi
        return rec
    rec["status"] = "indeterminate"
    if cfg.search_on_failure and t2k < g.m:
        rec["taukhc_upper"] = _upper_success(proc, engine, k, t2k + 1)
    return rec


def _upper_success(proc, engine, k, lo) -> Optional[int]:
    """Smallest probed ``t`` at which packing is found when inconclusive
    probes count as failures: an upper bound for the hitting time."""
    hi = proc.e_base
    if not engine.pack(snapshot(proc, hi), k).found:
        return None
    while hi - lo > 0:
        mid = (lo + hi) // 2
        if engine.pack(snapshot(proc, mid), k).found:
            hi = mid
        else:
            lo = mid + 1
    return hi


# --- campaign runners ---------------------------------------------------------


def _run(cfg: ExperimentConfig, base: Graph, fn: Callable, jobs: list, workers: Optional[int] = None):
    workers = cfg.workers if workers is None else workers
    records, timings = [], []
    if not jobs:
        return records, timings

    def timed(out_iter):
        for rec, sec in out_iter:
            records.append(rec)
            timings.append(sec)

    if workers <= 1:
        _init_worker(cfg, base)
        timed(_timed(fn, j) for j in jobs)
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(cfg, base)) as ex:
            timed(ex.map(_timed_star, [(fn, j) for j in jobs], chunksize=max(1, len(jobs) // (4 * workers))))
    return records, timings


def _timed(fn, job):
    t0 = time.perf_counter()
    rec = fn(job)
    return rec, time.perf_counter() - t0


def _timed_star(arg):
    return _timed(*arg)


@dataclass
class Campaign:
    config: ExperimentConfig
    records: list[dict]
    timings: list[float]
    base_n: int
    base_d: Optional[int]


def run_hitting_trials(cfg: ExperimentConfig, workers: Optional[int] = None) -> Campaign:
    base = cfg.base_graph()
    if cfg.permutations == "all":
        if base.m > 8:
            raise GraphInputError("exhaustive permutations limited to 8 edges")
        jobs = [(i, np.array(p)) for i, p in enumerate(itertools.permutations(range(base.m)))]
    else:
        jobs = list(range(cfg.trials))
    recs, tim = _run(cfg, base, _hitting_one, jobs, workers)
    return Campaign(cfg, recs, tim, base.n, base.regular_degree())


def run_threshold_scan(cfg: ExperimentConfig, workers: Optional[int] = None) -> Campaign:
    base = cfg.base_graph()
    jobs = [(gi, t, p) for gi, p in enumerate(cfg.p_grid) for t in range(cfg.trials)]
    recs, tim = _run(cfg, base, _threshold_one, jobs, workers)
    return Campaign(cfg, recs, tim, base.n, base.regular_degree())


def run_counterexample(cfg: ExperimentConfig, workers: Optional[int] = None) -> Campaign:
    spec = cfg.spec()
    if spec is None or spec.family != "counterexample":
        raise GraphInputError("counterexample campaign needs a counterexample GenSpec")
    base = spec.build()
    recs, tim = _run(cfg, base, _counterexample_one, list(range(cfg.trials)), workers)
    return Campaign(cfg, recs, tim, base.n, None)


def run_k_disjoint(cfg: ExperimentConfig, workers: Optional[int] = None) -> Campaign:
    base = cfg.base_graph()
    recs, tim = _run(cfg, base, _kdisjoint_one, list(range(cfg.trials)), workers)
    return Campaign(cfg, recs, tim, base.n, base.regular_degree())


RUNNERS = {
    "hitting": run_hitting_trials,
    "threshold": run_threshold_scan,
    "counterexample": run_counterexample,
    "k-disjoint": run_k_disjoint,
}


def run(cfg: ExperimentConfig, workers: Optional[int] = None) -> Campaign:
    return RUNNERS[cfg.experiment](cfg, workers)


# --- summaries ------------------------------------------------------------------


def _quantiles(xs: list[float]) -> Optional[dict]:
    if not xs:
        return None
    a = np.asarray(xs, dtype=float)
    q = np.quantile(a, [0.0, 0.25, 0.5, 0.75, 1.0])
    return dict(zip(("min", "q25", "median", "q75", "max"), (float(v) for v in q)))


def _proportion(hits: int, total: int) -> dict:
    ci = wilson(hits, total)
    return {
        "count": hits,
        "total": total,
        "frequency": hits / total if total else None,
        "wilson95": list(ci) if ci else None,
    }


def summarize(campaign: Campaign) -> dict:
    """Aggregate a campaign; an empty record list gives ``{"empty": True}``."""
    recs = campaign.records
    cfg = campaign.config
    if not recs:
        return {"experiment": cfg.experiment, "empty": True}
    out: dict[str, Any] = {"experiment": cfg.experiment, "empty": False, "trials": len(recs),
                           "base_mode": "regenerated" if cfg.regenerate_base else "fixed"}
    n, d = campaign.base_n, campaign.base_d
    if cfg.experiment == "hitting":
        statuses = _count(r["status"] for r in recs)
        det = [r for r in recs if r["coincide"] is not None]
        out["status"] = statuses
        out["coincidence"] = _proportion(sum(bool(r["coincide"]) for r in det), len(det))
        out["coincidence_all_trials"] = _proportion(sum(bool(r["coincide"]) for r in recs), len(recs))
        ratios = [r["tau2"] / r["e_base"] for r in recs if r["tau2"] is not None]
        out["tau2_ratio"] = _quantiles(ratios)
        out["comparisons"] = _comparisons(recs, n, d, ratios)
    elif cfg.experiment == "threshold":
        out["table"] = _threshold_table(recs, cfg, n, d)
    elif cfg.experiment == "counterexample":
        fired = [r for r in recs if r["fired"] is not None]
        out["certificate"] = _proportion(sum(bool(r["fired"]) for r in fired), len(fired))
        out["exact_confirmed"] = sum(r["exact"] == "none" for r in recs)
        out["exact_runs"] = sum(r["exact"] not in ("skipped", "infeasible") for r in recs)
        out["overlay_degree"] = recs[0]["overlay_degree"]
    else:
        statuses = _count(r["status"] for r in recs)
        feas = [r for r in recs if r["status"] != "infeasible"]
        out["status"] = statuses
        out["packed_at_tau2k"] = _proportion(sum(bool(r["packed"]) for r in feas), len(feas))
    return out


def _count(items) -> dict:
    out: dict[str, int] = {}
    for x in items:
        out[x] = out.get(x, 0) + 1
    return dict(sorted(out.items()))


def _comparisons(recs, n, d, ratios) -> list[dict]:
    rows = []
    if not d or d >= n or not ratios:
        return rows
    win = tau2_window(n, d)
    med = float(np.median(ratios))
    rows.append({"quantity": "median tau2/e(G)", "observed": med, "predicted": win.p1,
                 "ratio": med / win.p1, "hypothesis_d_ge_10logn": win.hypothesis})
    lows = [r["low_at_p1"] for r in recs if r["low_at_p1"] is not None]
    if lows:
        pred = mindeg_probability_report(n, d, win.p1)
        mean = float(np.mean(lows))
        se = math.sqrt(pred.variance / len(lows)) if pred.variance > 0 else 0.0
        rows.append({"quantity": "degree<=1 vertices at m=p1 e(G)", "observed": mean, "predicted": pred.mean,
                     "z": (mean - pred.mean) / se if se else None, "samples": len(lows)})
    return rows


def _threshold_table(recs, cfg, n, d) -> dict:
    rows = []
    for gi, p in enumerate(cfg.p_grid):
        rs = [r for r in recs if r["grid"] == gi]
        yes = sum(r["found"] is True for r in rs)
        unk = sum(r["found"] == "unknown" for r in rs)
        det = len(rs) - unk
        row = {"p": p, "trials": len(rs), "hamiltonian": yes, "unknown": unk}
        row.update(_proportion(yes, det))
        rows.append(row)
    flags = []
    for a, b in zip(rows, rows[1:]):
        if a["frequency"] is None or b["frequency"] is None:
            continue
        se = math.sqrt(sum(r["frequency"] * (1 - r["frequency"]) / max(r["total"], 1) for r in (a, b)))
        if b["frequency"] < a["frequency"] - 2 * se:
            flags.append(f"frequency drops between p={a['p']} and p={b['p']}")
    overlay = None
    if d and d < n and n >= 3:
        overlay = sharp_threshold(n, d, cfg.epsilon).to_dict()
    return {"rows": rows, "monotone_flags": flags, "overlay": overlay}


# --- output -----------------------------------------------------------------------

COLUMNS = {
    "hitting": ["trial", "seed", "tau2", "tauhc", "coincide", "e_base", "status", "lo", "hi", "low_at_p1"],
    "threshold": ["grid", "p", "trial", "seed", "edges", "found"],
    "counterexample": ["trial", "seed", "tau2", "e_base", "overlay_degree", "e_b", "bound", "fired", "exact"],
    "k-disjoint": ["trial", "seed", "e_base", "k", "tau2k", "packed", "taukhc", "taukhc_upper", "coincide", "status"],
}


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def records_csv(experiment: str, records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = COLUMNS[experiment]
    w.writerow(cols)
    for r in records:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def write_outputs(campaign: Campaign, summary: dict, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "records": out / "records.csv",
        "summary": out / "summary.json",
        "timings": out / "timings.json",
    }
    with open(paths["records"], "w", encoding="utf-8", newline="") as fh:
        fh.write(records_csv(campaign.config.experiment, campaign.records))
    with open(paths["summary"], "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    with open(paths["timings"], "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps({"seconds": campaign.timings, "pid": os.getpid()}, indent=2) + "\n")
    return {k: str(v) for k, v in paths.items()}
