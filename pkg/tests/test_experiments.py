import itertools
import json

import pytest

from hamhit.experiments import (
    ExperimentConfig,
    records_csv,
    run,
    run_counterexample,
    run_hitting_trials,
    run_k_disjoint,
    run_threshold_scan,
    summarize,
    wilson,
    write_outputs,
)
from hamhit.generators import complete
from hamhit.graph import GraphInputError, canonical, write_edge_list


def cfg(**kw):
    return ExperimentConfig.from_dict(kw)


def test_config_validation():
    with pytest.raises(GraphInputError):
        cfg(experiment="nope", base={"family": "complete", "n": 4})
    with pytest.raises(GraphInputError):
        cfg(experiment="threshold", base={"family": "complete", "n": 4}, p_grid=[0.5, 0.2], trials=1)
    with pytest.raises(GraphInputError):
        cfg(experiment="hitting", trials=1)
    with pytest.raises(GraphInputError):
        cfg(experiment="hitting", base={"family": "complete", "n": 4}, trials=-1)
    with pytest.raises(GraphInputError):
        cfg(experiment="hitting", base={"family": "complete", "n": 4}, colour="red")


def test_wilson_interval():
    assert wilson(0, 0) is None
    lo, hi = wilson(10, 10)
    assert hi == 1.0 and 0.69 < lo < 0.73
    lo, hi = wilson(0, 10)
    assert lo == 0.0
    lo, hi = wilson(50, 100)
    assert lo == pytest.approx(0.4038, abs=1e-4) and hi == pytest.approx(0.5962, abs=1e-4)


def test_zero_trials_give_empty_summary():
    camp = run_hitting_trials(cfg(experiment="hitting", base={"family": "complete", "n": 6}, trials=0))
    assert camp.records == []
    assert summarize(camp) == {"experiment": "hitting", "empty": True}


def _k4_oracle():
    g = complete(4)
    hcs = []
    for rest in itertools.permutations((1, 2, 3)):
        seq = (0,) + rest
        hcs.append({canonical(seq[i], seq[(i + 1) % 4]) for i in range(4)})
    hits = 0
    for perm in itertools.permutations(range(6)):
        order = [g.edges[i] for i in perm]
        deg = [0] * 4
        tau2 = tauhc = None
        for t in range(1, 7):
            a, b = order[t - 1]
            deg[a] += 1
            deg[b] += 1
            if tau2 is None and min(deg) >= 2:
                tau2 = t
            if tauhc is None and any(c <= set(order[:t]) for c in hcs):
                tauhc = t
        hits += tau2 == tauhc
    return hits


def test_k4_exhaustive_run_matches_oracle():
    camp = run_hitting_trials(cfg(experiment="hitting", base={"family": "complete", "n": 4}, permutations="all"))
    assert len(camp.records) == 720
    for r in camp.records:
        assert r["tauhc"] >= r["tau2"]
    s = summarize(camp)
    assert s["coincidence"]["count"] == _k4_oracle()
    assert s["coincidence"]["frequency"] == _k4_oracle() / 720


def test_hitting_determinism_and_workers():
    c = cfg(experiment="hitting", base={"family": "regular", "n": 60, "d": 6, "seed": 2}, trials=6, seed=9)
    a = run(c)
    b = run(c)
    w = run(c, workers=2)
    assert records_csv("hitting", a.records) == records_csv("hitting", b.records) == records_csv("hitting", w.records)
    for r in a.records:
        assert r["tauhc"] is None or r["tauhc"] >= r["tau2"]
    c2 = cfg(experiment="hitting", base={"family": "regular", "n": 60, "d": 6, "seed": 2}, trials=3, seed=9,
             regenerate_base=True)
    s = summarize(run(c2))
    assert s["base_mode"] == "regenerated"


def test_hitting_from_graph_file(tmp_path):
    path = tmp_path / "k6.txt"
    write_edge_list(complete(6), path)
    camp = run(cfg(experiment="hitting", graph_file=str(path), trials=4, seed=1))
    assert [r["trial"] for r in camp.records] == [0, 1, 2, 3]
    assert all(r["e_base"] == 15 for r in camp.records)


def test_threshold_scan_endpoints():
    c = cfg(experiment="threshold", base={"family": "complete", "n": 8}, p_grid=[0.0, 0.5, 1.0], trials=20, seed=3)
    s = summarize(run_threshold_scan(c))
    rows = s["table"]["rows"]
    assert rows[0]["frequency"] == 0.0 and rows[-1]["frequency"] == 1.0
    assert s["table"]["overlay"]["n"] == 8


def test_threshold_scan_monotone_flags_are_reported():
    c = cfg(experiment="threshold", base={"family": "regular", "n": 40, "d": 6, "seed": 1},
            p_grid=[0.3, 0.5, 0.7, 0.9], trials=30, seed=3)
    s = summarize(run_threshold_scan(c))
    freqs = [r["frequency"] for r in s["table"]["rows"]]
    assert isinstance(s["table"]["monotone_flags"], list)
    assert freqs[-1] >= freqs[0]


def test_counterexample_pure_bipartite_always_fires():
    c = cfg(experiment="counterexample", base={"family": "counterexample", "n": 12, "c": 0.05}, trials=10, seed=1)
    camp = run_counterexample(c)
    assert all(r["overlay_degree"] == 0 for r in camp.records)
    assert all(r["fired"] and r["e_b"] == 0 and r["exact"] == "none" for r in camp.records)
    assert summarize(camp)["certificate"]["frequency"] == 1.0


def test_counterexample_with_overlay_is_sound():
    c = cfg(experiment="counterexample", base={"family": "counterexample", "n": 12, "c": 1.0, "seed": 2},
            trials=20, seed=4)
    camp = run_counterexample(c)
    assert camp.records[0]["overlay_degree"] == 5
    for r in camp.records:
        if r["fired"]:
            assert r["exact"] == "none"
        assert r["bound"] == 4


def test_k_disjoint_examples():
    camp = run_k_disjoint(cfg(experiment="k-disjoint", base={"family": "complete", "n": 5}, k=2, trials=5, seed=1))
    for r in camp.records:
        assert r["tau2k"] == 10 and r["packed"] and r["taukhc"] == r["tau2k"]
    camp = run_k_disjoint(cfg(experiment="k-disjoint", base={"family": "complete", "n": 5}, k=3, trials=2))
    assert all(r["status"] == "infeasible" and r["tau2k"] is None for r in camp.records)


def test_k_disjoint_cycle_base(tmp_path):
    from hamhit.graph import cycle_graph

    path = tmp_path / "c9.txt"
    write_edge_list(cycle_graph(9), path)
    camp = run_k_disjoint(cfg(experiment="k-disjoint", graph_file=str(path), k=1, trials=3))
    assert all(r["tau2k"] == 9 and r["packed"] for r in camp.records)


def test_outputs(tmp_path):
    c = cfg(experiment="hitting", base={"family": "complete", "n": 10}, trials=3, seed=5)
    camp = run(c)
    s = summarize(camp)
    paths = write_outputs(camp, s, tmp_path / "out")
    raw = open(paths["records"], "rb").read()
    assert b"\r" not in raw
    assert raw.decode().splitlines()[0].startswith("trial,seed,tau2,tauhc,coincide,e_base")
    assert len(raw.decode().splitlines()) == 4
    assert json.loads(open(paths["summary"]).read())["trials"] == 3
    assert "seconds" in json.loads(open(paths["timings"]).read())


def test_config_load(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"experiment": "hitting", "base": {"family": "complete", "n": 5}, "trials": 2}')
    assert ExperimentConfig.load(p).trials == 2
    p.write_text("{nope")
    with pytest.raises(GraphInputError, match="line 1"):
        ExperimentConfig.load(p)
