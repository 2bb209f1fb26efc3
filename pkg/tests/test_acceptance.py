"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion
summary lines; the full suite is also reachable through the CLI as
`choimetric run-all --out report.csv`.
"""

import choimetric.experiments as E

SEED = 2026


def report(num, name, ok, detail=""):
    flag = "PASS" if ok else "FAIL"
    print(f"[{flag}] criterion {num}: {name} {detail}".rstrip())
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def _failures(records):
    return [r for r in records if not r.ok]


def test_criterion_01_cp_characterization():
    recs = E.run_cp_characterization(seed=SEED, trials=200)
    agreements = [r for r in recs if r.experiment == "cp-characterization"]
    witness = [r for r in recs if r.experiment == "cp-transpose-witness"]
    ok = len(agreements) >= 200 and not _failures(recs)
    detail = (f"{len(agreements)} maps, predicate/oracle agreement "
              f"{sum(r.ok for r in agreements)}/{len(agreements)}, "
              f"transpose witness eig {witness[0].lhs:+.2e}")
    report(1, "CP characterization via the associated functional", ok, detail)


def test_criterion_02_cj_embedding():
    recs = E.run_embedding(seed=SEED, trials=100)
    dens = [r for r in recs if r.experiment == "embedding-density"]
    state = [r for r in recs if r.experiment == "embedding-state"]
    ok = len(dens) == 100 and not _failures(recs)
    worst = max(r.lhs for r in dens)
    detail = (f"100 maps, max |density - choi^t| = {worst:.2e}, "
              f"state<=>normalized agreement {sum(r.ok for r in state)}/100")
    report(2, "Choi-Jamiolkowski embedding", ok, detail)


def test_criterion_03_flip_identity():
    recs = E.run_flip(seed=SEED, trials=50)
    ok = len(recs) == 50 and not _failures(recs)
    worst = max(r.lhs for r in recs)
    report(3, "flip identity for tensor channels", ok,
           f"50 pairs, max residual {worst:.2e} < 1e-11")


def test_criterion_04_adjoints():
    recs = E.run_adjoints(seed=SEED, trials=60)
    ok = not _failures(recs)
    ident = max(r.lhs for r in recs if r.experiment == "adjoint-identity")
    mult = max(r.lhs for r in recs if r.experiment == "adjoint-multiplier")
    report(4, "trace adjoints", ok,
           f"defining identity residual {ident:.2e}, multiplier adjoint "
           f"residual {mult:.2e}")


def test_criterion_05_kasparov():
    recs = E.run_kasparov(seed=SEED, samples=500)
    ok = not _failures(recs)
    toy = [r for r in recs if r.experiment == "kasparov-toy-eigenvalues"][0]
    dom = [r for r in recs if r.experiment == "kasparov-domination"][0]
    detail = (f"four parities valid, toy eigenvalue residual {toy.lhs:.2e}, "
              f"domination max violation {dom.lhs:.2e} over 500 samples")
    report(5, "Kasparov product invariants and domination", ok, detail)


def test_criterion_06_stability():
    recs = E.run_stability(seed=SEED, trials=25)
    main = [r for r in recs if r.experiment in ("stability", "stability-generic")]
    ok = len(main) == 25 and not _failures(recs)
    worst = max(abs(r.lhs - r.rhs) for r in main)
    hyp = [r for r in recs if r.experiment.startswith("stability-hypothesis")]
    detail = (f"25 pairs on Z2/Z3 at n=2, max |Delta_2 - Delta_1| = "
              f"{worst:.2e} < 1e-5, hypothesis audit max violation "
              f"{max(r.lhs for r in hyp):.2e}")
    report(6, "stability of the induced metrics", ok, detail)


def test_criterion_07_chaining():
    recs = E.run_chaining(seed=SEED, quadruples=100)
    ok = len(recs) == 400 and not _failures(recs)
    worst = min(r.slack for r in recs)
    report(7, "chaining for multiplier channels", ok,
           f"100 quadruples x 4 groups, min slack {worst:+.3e} >= -2e-7")


def test_criterion_08_contraction():
    recs = E.run_contraction(seed=SEED, pairs=500)
    ok = not _failures(recs)
    worst = max(r.lhs for r in recs)
    report(8, "multiplier seminorm contraction", ok,
           f"500 pairs x 4 groups, max ratio {worst:.6f} <= 1 + 1e-9")


def test_criterion_09_mk_solver():
    recs = E.run_mk_correctness(seed=SEED)
    two = [r for r in recs if r.experiment == "mk-two-point"]
    three = [r for r in recs if r.experiment == "mk-three-point"]
    dual = E.run_duality(seed=SEED, trials=50)
    finite = [r for r in dual if r.status != "infinite"]
    infinite = [r for r in dual if r.status == "infinite"]
    ok = (not _failures(recs)) and (not _failures(dual)) and len(dual) == 50
    detail = (f"two-point max err {max(abs(r.lhs - r.rhs) for r in two):.2e}, "
              f"three-point vs grid {max(abs(r.lhs - r.rhs) for r in three):.2e}, "
              f"duality: {len(finite)} finite agree to 1e-5, "
              f"{len(infinite)} infinite detected identically")
    report(9, "Monge-Kantorovich solver correctness", ok, detail)


def test_criterion_10_metric_axioms():
    recs = E.run_metric_axioms(seed=SEED, triples=10)
    ok = not _failures(recs)
    sym = max(r.lhs for r in recs if r.experiment.endswith("symmetry"))
    tri = min(r.slack for r in recs if r.experiment.endswith("triangle"))
    report(10, "metric axioms for mk and Delta", ok,
           f"max symmetry defect {sym:.2e} <= 1e-12, "
           f"min triangle slack {tri:+.3e}")
