"""Exit criteria. Each test logs one PASS/FAIL line, shown in the terminal summary."""

import time

import numpy as np
import pytest

from sefcc import fcc
from sefcc.channel import SimConfig, run_simulation, union_bound_fer
from sefcc.cli import main
from sefcc.enumeration import SearchStrategy, certify_theorems, max_sum_census, sample_corpus
from sefcc.fcc import construct_max_sum, extend_to_full, spectrum
from sefcc.hamming import HammingCodebook, distance3_graph

SIM_TRIALS = 2_000_000
SIM_POINTS = tuple(float(x) for x in range(10))
SIM_SEED = 20260101


def record(log, number, title, passed, detail):
    log.append(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")
    assert passed, detail


@pytest.fixture(scope="module")
def corpus(graph):
    codes = sample_corpus(graph, 10_000, seed=0)
    par = fcc.unpack(codes)
    brute = np.zeros(len(codes), dtype=bool)
    for s in range(0, len(codes), 4096):
        brute[s:s + 4096] = fcc.batch_cross_class_min(par[s:s + 4096]) >= 3
    return codes, par, brute


@pytest.fixture(scope="module")
def sweep(c1, c2, hcmf):
    cfg = SimConfig(SIM_POINTS, SIM_TRIALS, seed=SIM_SEED, workers=1)
    start = time.perf_counter()
    r1 = run_simulation(c1, hcmf, cfg, "C1")
    r2 = run_simulation(c2, hcmf, cfg, "C2")
    return r1, r2, time.perf_counter() - start


def test_1_structure(acceptance_log):
    start = time.perf_counter()
    cb = HammingCodebook()
    g = distance3_graph(cb)
    elapsed = time.perf_counter() - start
    checks = [
        cb.weight_enumerator() == {0: 1, 3: 7, 4: 7, 7: 1},
        all(g.degree(i) == 7 for i in range(16)),
        len(g.edges) == 56,
        g.is_bipartition(),
        sorted(i + 1 for i in g.partite_odd) == [3, 4, 5, 6, 9, 10, 15, 16],
        sorted(i + 1 for i in g.partite_even) == [1, 2, 7, 8, 11, 12, 13, 14],
        elapsed < 1.0,
    ]
    record(acceptance_log, 1, "structure", all(checks),
           f"weights={cb.weight_enumerator()} edges={len(g.edges)} checks={checks} t={elapsed:.3f}s")


def test_2_sum_distance_bound(acceptance_log, census):
    msg = fcc.message_sum_distance()
    top = int(census.sums.max())
    record(acceptance_log, 2, "sum-distance bound", top == 73728 and msg == 57344,
           f"census_max={top} message_part={msg}")


def test_3_max_sum_uniqueness(acceptance_log, graph, full_sweep_valid):
    start = time.perf_counter()
    report = max_sum_census(graph, SearchStrategy("backtracking"))
    elapsed = time.perf_counter() - start
    from sefcc.enumeration import valid_assignments

    sweep_matches = np.array_equal(full_sweep_valid, valid_assignments(graph))
    passed = (
        report.max_sum_count == 9800
        and report.max_sum_all_match_construction
        and elapsed < 60
        and sweep_matches
    )
    record(acceptance_log, 3, "max-sum uniqueness", passed,
           f"max_sum_count={report.max_sum_count} all_from_construction={report.max_sum_all_match_construction} "
           f"census_t={elapsed:.1f}s full_sweep_agrees={sweep_matches} valid={len(full_sweep_valid)}")


def test_4_distance_properties(acceptance_log, census):
    fam = fcc.max_sum_family_packed()
    spectra = fcc.batch_spectra_direct(fcc.unpack(fam))
    dmin = fcc.spectrum_dmin(spectra)
    family_ok = bool((dmin == 2).all() and (spectra[:, 2] == 960).all())
    report = census.report
    passed = (
        family_ok
        and report.min_N2_over_valid_dmin2 == 960
        and report.min_N2_achievers_match_construction
    )
    record(acceptance_log, 4, "distance properties", passed,
           f"family_dmin2_N2_960={family_ok} min_N2={report.min_N2_over_valid_dmin2} "
           f"achievers_are_family={report.min_N2_achievers_match_construction} "
           f"valid_dmin2={report.valid_dmin2_count}")


def test_5_validity_equivalence(acceptance_log, graph, corpus):
    codes, par, brute = corpus
    graph_valid = fcc.batch_is_valid(par, graph)
    disagreements = int((graph_valid != brute).sum())
    n_random = len(codes) - 4 - 9800
    record(acceptance_log, 5, "validity equivalence", disagreements == 0 and n_random >= 10_000,
           f"corpus={len(codes)} random={n_random} valid={int(brute.sum())} disagreements={disagreements}")


def test_6_dmin_condition(acceptance_log, graph, corpus, c2):
    codes, par, brute = corpus
    vpar = par[brute]
    dmin = fcc.spectrum_dmin(fcc.batch_spectra_direct(vpar))
    disagreements = int((fcc.batch_has_dmin_2(vpar, graph) != (dmin == 2)).sum())
    opt = spectrum(c2).d_min
    record(acceptance_log, 6, "d_min condition", disagreements == 0 and opt == 1,
           f"valid_corpus={len(vpar)} disagreements={disagreements} optimal_fer_dmin={opt}")


def test_7_simulation_orderings(acceptance_log, sweep, c1, c2, hcmf):
    r1, r2, elapsed = sweep
    p1 = next(p for p in r1.points if p.ebn0_db == 6.0)
    p2 = next(p for p in r2.points if p.ebn0_db == 6.0)
    fer_order = p2.fer_ci95[1] < p1.fer_ci95[0]
    ber_order = p1.ber_ci95[1] < p2.ber_ci95[0]
    bound_ok = all(
        union_bound_fer(code, hcmf, p.ebn0_db) >= p.fer_ci95[0]
        for code, res in ((c1, r1), (c2, r2))
        for p in res.points
        if p.ebn0_db >= 6
    )
    passed = fer_order and ber_order and bound_ok and elapsed < 300
    record(acceptance_log, 7, "simulation orderings @6dB", passed,
           f"FER C1={p1.fer:.3e} {_ci(p1.fer_ci95)} C2={p2.fer:.3e} {_ci(p2.fer_ci95)}; "
           f"BER C1={p1.ber:.3e} {_ci(p1.ber_ci95)} C2={p2.ber:.3e} {_ci(p2.ber_ci95)}; "
           f"union_bound_ok={bound_ok} sweep_0-9dB_t={elapsed:.1f}s trials/pt={SIM_TRIALS}")


def _ci(ci):
    return f"[{ci[0]:.2e},{ci[1]:.2e}]"


def test_8_determinism(acceptance_log, graph, tmp_path):
    a = certify_theorems(graph).to_text()
    b = certify_theorems(graph).to_text()
    c1_file, c2_file = tmp_path / "c1.txt", tmp_path / "c2.txt"
    c1_file.write_text(construct_max_sum().to_text())
    c2_file.write_text(fcc.optimal_fer_assignment(fcc.Word(0, 2)).to_text())
    outs = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        main(["simulate", "--compare", str(c1_file), str(c2_file), "--trials", "50000", "--seed", "7",
              "--out", str(out)])
        outs.append(out.read_bytes())
    passed = a == b and outs[0] == outs[1] and len(outs[0]) > 0
    record(acceptance_log, 8, "determinism", passed,
           f"census_identical={a == b} simulation_csv_identical={outs[0] == outs[1]}")
