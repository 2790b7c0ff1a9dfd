"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass line
per criterion.
"""

import math

import numpy as np
from click.testing import CliRunner

import paritylab as pl
from paritylab import ChannelParams, OriginTrajectory
from paritylab.channel import default_points_window
from paritylab.cli import main as cli_main
from paritylab.rabi import default_taus
from conftest import random_density_matrix, random_pure_state

LN2 = math.log(2.0)
TWO_OVER_PI = 2.0 / math.pi

ECS_ALPHAS = (0.0, 0.5, 1.0, 2.0)
EBS_CASES = tuple((1, M, eta) for M in (2, 3, 4) for eta in (0.2, 0.5, 0.9))
ETS_NBARS = (0.5, 1.0)
ENVIRONMENTS = (0.0, 0.5)


def _universality_states():
    for a in ECS_ALPHAS:
        yield f"ecs |alpha|={a}", pl.PhotonAdded(1, pl.Coherent(a))
    for k, M, eta in EBS_CASES:
        yield f"ebs k={k} M={M} eta={eta}", pl.PhotonAdded(k, pl.Binomial(eta, M))
    for nbar in ETS_NBARS:
        yield f"ets nbar={nbar}", pl.PhotonAdded(1, pl.Thermal(nbar))


def _final_zero(traj):
    scan = pl.origin_zero_crossings(traj)
    assert scan.crossings, "trajectory never crossed zero"
    return scan.crossings[-1]


def test_criterion_1_threshold_universality():
    worst_analytic = 0.0
    for n in ENVIRONMENTS:
        tc = pl.threshold_tc(n)
        times = np.linspace(0.0, 1.15 * tc, 1200)
        for label, spec in _universality_states():
            rho = pl.build_state(spec)
            traj = pl.analytic_origin_trajectory(rho, n, times)
            dev = abs(_final_zero(traj) - tc)
            worst_analytic = max(worst_analytic, dev)
            assert dev <= 1e-9, (label, n, dev)

    worst_lindblad = 0.0
    for n in ENVIRONMENTS:
        tc = pl.threshold_tc(n)
        times = np.linspace(0.85 * tc, 1.1 * tc, 26)
        for label, spec in _universality_states():
            rho = pl.build_state(spec)
            traj = pl.lindblad_origin_trajectory(rho, n, times)
            dev = abs(_final_zero(traj) - tc)
            worst_lindblad = max(worst_lindblad, dev)
            assert dev <= 5e-3, (label, n, dev)

    worst_fd = 0.0
    n = 0.5
    tc = pl.threshold_tc(n)
    times = np.linspace(0.85 * tc, 1.05 * tc, 9)
    for spec in (pl.PhotonAdded(1, pl.Binomial(0.0, 2)),
                 pl.PhotonAdded(1, pl.Binomial(0.5, 2)),
                 pl.PhotonAdded(1, pl.Binomial(1.0, 2)),
                 pl.PhotonAdded(1, pl.Coherent(0.5)),
                 pl.PhotonAdded(1, pl.Thermal(1.0))):
        rho = pl.build_state(spec)
        traj = pl.fd_origin_trajectory(rho, n, times)
        dev = abs(_final_zero(traj) - tc)
        worst_fd = max(worst_fd, dev)
        assert dev <= 5e-3, (spec, dev)

    print(f"\n[criterion 1] PASS threshold universality: analytic dev "
          f"{worst_analytic:.2e} <= 1e-9, lindblad {worst_lindblad:.2e} <= 5e-3, "
          f"fd {worst_fd:.2e} <= 5e-3")


def test_criterion_2_ecs_regime_table():
    for n in ENVIRONMENTS:
        tc = pl.threshold_tc(n)
        inner = np.linspace(1e-4, tc - 1e-4, 800)

        vals = np.array([pl.ecs_origin_wigner(0.5, n, float(t)) for t in inner])
        assert np.all(vals < 0.0)
        assert pl.ecs_origin_wigner(0.5, n, 0.0) < 0.0

        assert abs(pl.ecs_origin_wigner(1.0, n, 0.0)) < 1e-14
        vals = np.array([pl.ecs_origin_wigner(1.0, n, float(t)) for t in inner])
        assert np.all(vals < 0.0)

        tc1 = pl.threshold_tc1(1.5, n)
        assert 0.0 < tc1 < tc
        before = np.linspace(0.0, tc1, 400)
        after = np.linspace(tc1 + 1e-6, tc - 1e-6, 400)
        assert np.all(np.array([pl.ecs_origin_wigner(1.5, n, float(t))
                                for t in before]) >= -1e-15)
        assert np.all(np.array([pl.ecs_origin_wigner(1.5, n, float(t))
                                for t in after]) < 0.0)

    dev = abs(pl.threshold_tc1(math.sqrt(2.0), 0.0) - math.log(4.0 / 3.0))
    assert dev <= 1e-12
    print(f"\n[criterion 2] PASS regime table for |alpha| in {{0.5, 1, 1.5}}, "
          f"n in {{0, 0.5}}; tc1(sqrt2, 0) dev {dev:.1e} <= 1e-12")


def test_criterion_3_exact_critical_etas():
    worst = 0.0

    roots = pl.initial_parity_roots(1, 3)
    assert [k for _, k in roots] == ["crossing", "touch"]
    worst = max(worst, abs(roots[0][0] - math.sqrt(0.2)),
                abs(roots[1][0] - math.sqrt(0.5)))
    assert abs(roots[0][0] - 0.4) <= 0.05      # matches the reported ~0.4

    roots = pl.initial_parity_roots(1, 4)
    assert [k for _, k in roots] == ["crossing", "crossing"]
    worst = max(worst, abs(roots[0][0] - 1.0 / math.sqrt(6.0)),
                abs(roots[1][0] - math.sqrt(0.5)))
    assert abs(roots[0][0] - 0.4) <= 0.05
    assert abs(roots[1][0] - math.sqrt(2.0) / 2.0) <= 0.05

    roots = pl.initial_parity_roots(2, 2)
    assert [k for _, k in roots] == ["crossing", "crossing"]
    x_lo = (8.0 - math.sqrt(12.0)) / 26.0
    x_hi = (8.0 + math.sqrt(12.0)) / 26.0
    worst = max(worst, abs(roots[0][0] - math.sqrt(x_lo)),
                abs(roots[1][0] - math.sqrt(x_hi)))
    assert 0.25 < roots[0][0] < roots[1][0] < 0.75  # an intermediate-eta window

    assert worst <= 1e-10
    print(f"\n[criterion 3] PASS exact critical etas: worst deviation "
          f"{worst:.2e} <= 1e-10")


def test_criterion_4_ets_initial_value():
    worst = 0.0
    for nbar in (0.0, 0.5, 1.0, 2.0):
        expect = -2.0 / (math.pi * (1.0 + 2.0 * nbar) ** 2)
        for n in (0.0, 0.5, 1.0):
            dev = abs(pl.ets_origin_wigner(nbar, n, 0.0) - expect)
            worst = max(worst, dev)
            assert dev <= 1e-12, (nbar, n, dev)
    print(f"\n[criterion 4] PASS ets initial value -2/(pi(1+2nbar)^2): worst "
          f"deviation {worst:.2e} <= 1e-12")


def test_criterion_5_backend_cross_validation():
    times = np.linspace(0.0, 1.5, 13)
    worst_parity = 0.0
    for n in ENVIRONMENTS:
        for a in (0.5, 1.5):
            rho = pl.build_state(pl.PhotonAdded(1, pl.Coherent(a)))
            lind = pl.lindblad_origin_trajectory(rho, n, times)
            exact = np.array([pl.ecs_origin_wigner(a, n, float(t)) for t in times])
            dev = float(np.max(np.abs(lind.w00 - exact))) * math.pi / 2.0
            worst_parity = max(worst_parity, dev)
            assert dev <= 1e-6, ("ecs", a, n, dev)
        for nbar in ETS_NBARS:
            rho = pl.build_state(pl.PhotonAdded(1, pl.Thermal(nbar)))
            lind = pl.lindblad_origin_trajectory(rho, n, times)
            exact = np.array([pl.ets_origin_wigner(nbar, n, float(t)) for t in times])
            dev = float(np.max(np.abs(lind.w00 - exact))) * math.pi / 2.0
            worst_parity = max(worst_parity, dev)
            assert dev <= 1e-6, ("ets", nbar, n, dev)

    worst_grid = 0.0
    check_times = (0.1, 0.25, 0.4)
    for eta in (0.0, 0.5, 1.0):
        rho = pl.build_state(pl.PhotonAdded(1, pl.Binomial(eta, 2)))
        fd = pl.fd_origin_trajectory(rho, 0.5, check_times)
        grid0 = pl.wigner_grid(rho, default_points_window(rho, 241))
        for t, wfd in zip(check_times, fd.w00):
            wga = pl.propagate_wigner_gaussian(
                grid0, ChannelParams(0.5, t)).value_at_origin()
            dev = abs(wfd - wga)
            worst_grid = max(worst_grid, dev)
            assert dev <= 1e-3, (eta, t, dev)

    print(f"\n[criterion 5] PASS backend cross-validation: lindblad parity dev "
          f"{worst_parity:.2e} <= 1e-6, fd-vs-gaussian {worst_grid:.2e} <= 1e-3")


def _classify_surface_csv(text, n):
    rows = [l.split(",") for l in text.splitlines() if l and not l.startswith("#")][1:]
    by_eta: dict[float, list[tuple[float, float]]] = {}
    for eta_s, t_s, w_s in rows:
        by_eta.setdefault(float(eta_s), []).append((float(t_s), float(w_s)))
    labels = {}
    for eta, pts in by_eta.items():
        pts.sort()
        traj = OriginTrajectory(np.array([t for t, _ in pts]),
                                np.array([w for _, w in pts]), "analytic")
        labels[eta] = pl.classify_regime(traj, n)
    return labels, by_eta


def test_criterion_6_figure_datasets():
    runner = CliRunner()

    # added binomial k=1 M=3, n=0.5: two regimes split near eta ~ 0.447
    res = runner.invoke(cli_main, ["surface", "--m", "3", "--n", "0.5",
                                   "--eta-min", "0.05", "--eta-max", "0.95",
                                   "--eta-points", "10", "--points", "301"])
    assert res.exit_code == 0
    labels, _ = _classify_surface_csv(res.output, 0.5)
    for eta, label in labels.items():
        if eta < 0.44:
            assert label == "negative-throughout", (eta, label)
        if eta > 0.46:
            assert label == "positive-then-negative", (eta, label)

    # k=1 M=4, n=0.5: three regimes with boundaries 1/sqrt(6) and sqrt(2)/2
    res = runner.invoke(cli_main, ["surface", "--m", "4", "--n", "0.5",
                                   "--eta-min", "0.05", "--eta-max", "0.95",
                                   "--eta-points", "19", "--points", "301"])
    assert res.exit_code == 0
    labels, _ = _classify_surface_csv(res.output, 0.5)
    b1, b2 = 1.0 / math.sqrt(6.0), math.sqrt(2.0) / 2.0
    for eta, label in labels.items():
        if eta < b1 - 0.02:
            assert label == "negative-throughout", (eta, label)
        elif b1 + 0.02 < eta < b2 - 0.02:
            assert label == "positive-then-negative", (eta, label)
        elif b2 + 0.02 < eta < 0.97:
            assert label == "negative-positive-negative", (eta, label)

    # k=2 M=2, n=0: negativity only on the intermediate window, dying early
    res = runner.invoke(cli_main, ["surface", "--k", "2", "--m", "2", "--n", "0",
                                   "--eta-min", "0.05", "--eta-max", "0.95",
                                   "--eta-points", "19", "--points", "301"])
    assert res.exit_code == 0
    labels, by_eta = _classify_surface_csv(res.output, 0.0)
    w1, w2 = math.sqrt((8 - math.sqrt(12)) / 26), math.sqrt((8 + math.sqrt(12)) / 26)
    for eta, pts in by_eta.items():
        w0 = pts[0][1]
        if w1 + 0.02 < eta < w2 - 0.02:
            assert w0 < 0.0, (eta, w0)               # negative initial parity
        elif eta < w1 - 0.02 or eta > w2 + 0.02:
            assert w0 >= -1e-12, (eta, w0)           # ...only inside the window
        if eta < w1 - 0.02:
            assert all(w >= -1e-12 for _, w in pts)  # small eta: always positive
        traj = OriginTrajectory(np.array([t for t, _ in pts]),
                                np.array([w for _, w in pts]), "analytic")
        scan = pl.origin_zero_crossings(traj)
        if scan.crossings:
            # any two-photon negativity dies strictly before the threshold
            assert scan.crossings[-1] < LN2 - 1e-3, (eta, scan)
        assert all(w >= -1e-12 for t, w in pts if t > LN2 - 0.005), eta

    print("\n[criterion 6] PASS figure datasets: two-regime split at ~0.447 (M=3), "
          "three regimes at 1/sqrt6 and sqrt2/2 (M=4), early-dying intermediate "
          "window (k=2)")


def test_criterion_7_rabi_round_trip():
    taus = default_taus()
    worst = 0.0
    for spec in (pl.Fock(0), pl.Fock(1), pl.Coherent(1.0), pl.Thermal(0.5),
                 pl.PhotonAdded(1, pl.Binomial(0.5, 2))):
        rho = pl.build_state(spec)
        rec = pl.fresnel_reconstruct(pl.jc_trace(rho, taus))
        dev = abs(rec - pl.mean_parity(rho))
        worst = max(worst, dev)
        assert dev <= 0.02, (spec, dev)

    printed = pl.fresnel_reconstruct(pl.jc_trace(pl.build_state(pl.Fock(0)), taus),
                                     corrected=False)
    assert abs(printed - math.pi) <= 0.05
    print(f"\n[criterion 7] PASS rabi round trip: worst error {worst:.3f} <= 0.02; "
          f"uncorrected constant gives {printed:.4f} ~ pi on vacuum")


def test_criterion_8_property_suites(rng):
    worst_origin = 0.0
    for _ in range(200):
        dim = int(rng.integers(2, 24))
        rho = random_density_matrix(rng, dim, rank=int(rng.integers(1, 4)))
        dev = abs(pl.wigner_point(rho, (0.0, 0.0)) - TWO_OVER_PI * pl.mean_parity(rho))
        worst_origin = max(worst_origin, dev)
        assert dev <= 1e-10

    worst_norm = 0.0
    for _ in range(100):
        dim = int(rng.integers(1, 16))
        psi = random_pure_state(rng, dim)
        raised = pl.photon_add(psi, 1)
        # photon_add normalizes; recompute the raw norm from the weights
        raw = float(np.sum(psi.probabilities() * np.arange(1, dim + 1)))
        dev = abs(raw - (1.0 + psi.mean_photon_number()))
        worst_norm = max(worst_norm, dev)
        assert dev <= 1e-12
        assert abs(np.sum(raised.probabilities()) - 1.0) <= 1e-12

    worst_mass = 0.0
    for spec in (pl.Fock(0), pl.Fock(3), pl.Coherent(1.0), pl.Thermal(0.5),
                 pl.PhotonAdded(1, pl.Binomial(0.5, 2)),
                 pl.PhotonAdded(1, pl.Thermal(1.0))):
        grid = pl.wigner_grid(pl.build_state(spec))
        dev = abs(grid.riemann_mass() - 1.0)
        worst_mass = max(worst_mass, dev)
        assert dev <= 1e-3, (spec, dev)

    worst_fixed = 0.0
    for n in (0.5, 1.0):
        th = pl.build_state(pl.Thermal(n))
        out = pl.evolve_lindblad(th, ChannelParams(n, 0.8))
        dev = float(np.max(np.abs(out.populations()[:th.dim] - th.populations())))
        dev = max(dev, float(np.sum(out.populations()[th.dim:])))
        worst_fixed = max(worst_fixed, dev)
        assert dev <= 1e-9, (n, dev)

    print(f"\n[criterion 8] PASS property suites: origin identity {worst_origin:.1e} "
          f"<= 1e-10 (200 states), norm identity {worst_norm:.1e} <= 1e-12, grid "
          f"mass {worst_mass:.1e} <= 1e-3, lindblad fixed point {worst_fixed:.1e} <= 1e-9")
