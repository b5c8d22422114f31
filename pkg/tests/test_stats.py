import random
from fractions import Fraction

import pytest

from pagiant import processes as P, stats as S, theory as T
from pagiant.graph_core import MultiGraph


def test_histogram_basics():
    h = S.DegreeHistogram.from_degrees([2, 1, 1])
    assert h.n == 3
    assert S.pi_k(h, 1) == 2 / 3
    assert S.mu_hat_k(h, 2) == 2.0
    assert S.breve_mu(h) == 0 - 1 - 1
    assert S.DegreeHistogram.from_counts({1: 2, 2: 1}) == h


def test_breve_mu_zero_for_all_deg_two():
    h = S.DegreeHistogram.from_degrees([2] * 10)
    assert S.breve_mu(h) == 0


def test_degree_fluctuation_centers_at_critical_density():
    # mu2 - 2 mu1 estimates E Y(Y-2): zero at m = m_c, one at m = n/2
    n = 20_000
    for m, target, tol in ((n // 4, 0.0, 0.15), (n // 2, 1.0, 0.25)):
        cfg = P.ProcessConfig(n=n, weight_rule=P.LinearAlpha(1.0), mode="multigraph",
                              m_max=m, checkpoints=(m,), seed=31)
        traj = P.run_process(cfg)
        h = S.DegreeHistogram.from_counts(dict(traj.records[-1].degree_hist))
        val = S.mu_hat_k(h, 2) - 2 * S.mu_hat_k(h, 1)
        assert abs(val - target) < tol
        assert S.breve_mu(h) == round(val * n)


def test_empirical_mean_degree_exact():
    n, m = 5000, 3000
    cfg = P.ProcessConfig(n=n, weight_rule=P.LinearAlpha(2.0), mode="multigraph",
                          m_max=m, checkpoints=(m,), seed=32)
    traj = P.run_process(cfg)
    h = S.DegreeHistogram.from_counts(dict(traj.records[-1].degree_hist))
    assert S.mu_hat_k(h, 1) == 2 * m / n


def test_tv_and_chi_square_null_case():
    rng = random.Random(33)
    model = T.NegBinomial(1.0, 0.5)
    degs = [_nb_draw(rng) for _ in range(100_000)]
    h = S.DegreeHistogram.from_degrees(degs)
    assert S.tv_distance(h, model) < 0.01
    res = S.chi_square(h, model)
    assert res.pvalue > 1e-4


def _nb_draw(rng):
    # geometric on {0,1,...} with success probability 1/2
    k = 0
    while rng.random() < 0.5:
        k += 1
    return k


def test_tv_counts_missing_tail_mass():
    h = S.DegreeHistogram.from_degrees([0] * 10)
    model = T.NegBinomial(1.0, 0.5)
    # TV between a point mass at 0 and the geometric law is exactly 1/2
    assert abs(S.tv_distance(h, model) - 0.5) < 1e-12


def test_chi_square_degenerate_rejected():
    h = S.DegreeHistogram.from_degrees([0] * 50)
    with pytest.raises(ValueError):
        S.chi_square(h, T.NegBinomial(1.0, 1e-9))


def test_chi_square_counts_pools_small_cells():
    observed = {"a": 60, "b": 40, "c": 1}
    probs = {"a": 0.6, "b": 0.39, "c": 0.01}
    res = S.chi_square_counts(observed, probs)
    assert res.dof >= 1
    assert 0 <= res.pvalue <= 1


def test_kcore_triangle_and_tree():
    g = MultiGraph(3)
    for v, w in ((0, 1), (1, 2), (0, 2)):
        g.add_edge(v, w)
    assert S.kcore_census(g, 2) == 3
    tree = MultiGraph(5)
    for v, w in ((0, 1), (1, 2), (2, 3), (2, 4)):
        tree.add_edge(v, w)
    assert S.kcore_census(tree, 2) == 0
    assert S.kcore_census(tree, 1) == 5
    assert S.kcore_census(tree, 0) == 5


def test_kcore_loop_counts_toward_own_degree():
    g = MultiGraph(2)
    g.add_edge(0, 0)
    assert S.kcore_census(g, 2) == 1


def test_kcore_onset_within_five_percent_of_threshold():
    # the empirical 3-core onset brackets c_3 * n tightly at desk scale
    n = 100_000
    c3 = T.kcore_threshold(1.0, 3)
    fractions = {}
    for factor in (0.95, 1.05):
        m = int(round(factor * c3 * n))
        cfg = P.ProcessConfig(n=n, weight_rule=P.LinearAlpha(1.0), mode="multigraph",
                              m_max=m, checkpoints=(m,), seed=55)
        rng = random.Random(55 + int(100 * factor))
        state = P.ProcessState(cfg)
        for _ in range(m):
            state.step(rng)
        fractions[factor] = S.kcore_census(state.graph, 3) / n
    assert fractions[0.95] < 1e-3
    assert fractions[1.05] > 0.01


def test_kcore_antitone_in_k():
    rng = random.Random(34)
    g = MultiGraph(300)
    for _ in range(700):
        g.add_edge(rng.randrange(300), rng.randrange(300))
    sizes = [S.kcore_census(g, k) for k in range(6)]
    assert all(x >= y for x, y in zip(sizes, sizes[1:]))


def test_susceptibility_matches_component_census():
    rng = random.Random(35)
    cfg = P.ProcessConfig(n=1000, weight_rule=P.LinearAlpha(1.0), mode="multigraph",
                          m_max=200, checkpoints=(200,), seed=36)
    state = P.ProcessState(cfg)
    for _ in range(200):
        state.step(rng)
    l1, l2, s, census = state.tracker.component_stats()
    assert s == Fraction(sum(c * size * size for size, c in census.items()), 1000)


def test_aggregate_trivial_cases():
    recs = []
    for value in (0.0, 1.0):
        rec = P.CheckpointRecord(m=5, l1=int(value * 10), l2=0, s=1.0, loops=0,
                                 multi_edges=0, degree_hist=((0, 10),))
        recs.append(P.Trajectory((rec,), 5, False))
    summary = S.aggregate(recs, n=10)
    stat = summary.stat_at("L1_over_n", 5)
    assert stat.mean == 0.5
    assert abs(stat.stderr - 0.5) < 1e-12
    assert stat.ci_low <= stat.mean <= stat.ci_high

    same = [recs[0], recs[0], recs[0]]
    summary = S.aggregate(same, n=10)
    assert summary.stat_at("L1_over_n", 5).stderr == 0.0


def test_aggregate_requires_matching_schedules():
    rec_a = P.CheckpointRecord(m=1, l1=1, l2=1, s=1.0, loops=0, multi_edges=0,
                               degree_hist=((0, 2),))
    rec_b = P.CheckpointRecord(m=2, l1=1, l2=1, s=1.0, loops=0, multi_edges=0,
                               degree_hist=((0, 2),))
    with pytest.raises(ValueError):
        S.aggregate([P.Trajectory((rec_a,), 1, False),
                     P.Trajectory((rec_b,), 2, False)], n=2)
    with pytest.raises(ValueError):
        S.aggregate([P.Trajectory((rec_a,), 1, False)], n=2)
