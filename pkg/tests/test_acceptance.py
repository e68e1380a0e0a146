"""Acceptance criteria, one test per criterion (split where a criterion has
independent parts).  Each test records a PASS/FAIL line that is printed in
the "acceptance criteria" section of the pytest terminal summary.
"""
import math
import time

import numpy as np
import pytest

from diracwell import WellScenario, cli
from diracwell import delay, scattering
from diracwell.wavepacket import PacketSpec, propagate_transmitted

from conftest import record

E_REF, V_REF, W_REF = 1.01, 0.4, 300.0


def report(criterion, ok, detail, seconds=None, limit=None):
    if seconds is not None:
        detail = f"{detail} [{seconds:.2f}s" + (f" / limit {limit:g}s]" if limit else "]")
        ok = ok and (limit is None or seconds < limit)
    record(criterion, ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
    assert ok, detail


def test_criterion_1_threshold_reproduction():
    t0 = time.perf_counter()
    et = delay.threshold_energy(0.4)
    betas = np.linspace(1e-4, 2.0, 100)
    diff = max(abs(delay.threshold_energy(b) - delay.threshold_energy_bisection(b)) for b in betas)
    ok = abs(et - 1.16) <= 0.005 and diff < 1e-9
    report("1 threshold", ok, f"E_t(0.4)={et:.6f}, max|closed-bisection|={diff:.1e}", time.perf_counter() - t0, 1)


def test_criterion_2_threshold_nonrel_limit():
    t0 = time.perf_counter()
    betas = np.concatenate([np.geomspace(1e-8, 1e-3, 200), np.linspace(1e-4, 1e-3, 50)])
    ratio = max(abs(delay.threshold_energy(b) - (1 + b / 2)) / (10 * b * b) for b in betas)
    report("2 threshold limit", ratio <= 1.0, f"max |E_t-(1+b/2)|/(10 b^2)={ratio:.3f}", time.perf_counter() - t0, 1)


def test_criterion_3_width_sweep_structure():
    t0 = time.perf_counter()
    E, V = E_REF, V_REF
    kp = float(scattering.kinematics(E, V)[1])
    worst_T = worst_res = worst_slope = 0.0
    exceeds_a = slopes_negative = True
    for m in range(1, 5):
        s = WellScenario(E, V, scattering.resonance_width(E, V, m))
        worst_T = max(worst_T, abs(scattering.transmission_probability(s) - 1.0))
        tau = delay.group_delay_rel(s)
        exceeds_a &= tau > s.well_width
        worst_res = max(worst_res, abs(tau - delay.resonance_delay(s)) / abs(tau))
        slope = delay.resonance_slope(s)
        slopes_negative &= slope < 0
        worst_slope = max(worst_slope, abs(delay.width_derivative(s, 1e-6) - slope) / abs(slope))
    grid = np.linspace(0.05, 4 * math.pi, 2000)
    tau = delay.relativistic_delay(E, V, grid / kp)
    dips = [bool(np.any(tau[(grid >= m * math.pi) & (grid < (m + 1) * math.pi)] < 0)) for m in range(4)]
    ok = (
        worst_T <= 1e-10 and exceeds_a and worst_res <= 1e-10
        and slopes_negative and worst_slope <= 1e-5 and all(dips)
    )
    detail = (
        f"|T-1|={worst_T:.1e}, tau>a={exceeds_a}, resonance rel err={worst_res:.1e}, "
        f"slopes<0={slopes_negative}, slope vs FD={worst_slope:.1e}, negative dip per period={dips}"
    )
    report("3 width-sweep structure", ok, detail, time.perf_counter() - t0, 5)


def test_criterion_4_phase_staircase():
    t0 = time.perf_counter()
    E, V = E_REF, V_REF
    _, kp, c = (float(v) for v in scattering.kinematics(E, V))
    err = max(abs(scattering.phase_shift(E, V, m * math.pi / kp) - m * math.pi) for m in range(1, 5))
    delta = 1e-4 / kp
    a = np.arange(0.05 / kp, 4 * math.pi / kp, delta)
    steps = np.diff(scattering.phase_shift(E, V, a))
    # |d phi / da| <= k' (chi + 1/chi) / 2, doubled for a safety margin
    bound = 2 * kp * delta * 0.5 * (c + 1 / c)
    ok = err <= 1e-10 and steps.min() >= 0 and steps.max() <= bound
    detail = f"max|phi(m pi/k')-m pi|={err:.1e}, min step={steps.min():.1e}, max step/bound={steps.max() / bound:.3f}"
    report("4 phase staircase", ok, detail, time.perf_counter() - t0, 5)


def test_criterion_5_derivative_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    n = 1000
    E = 1.0 + 4.0 * (1.0 - rng.random(n))
    V = 2.0 * (1.0 - rng.random(n))
    ka = 4 * math.pi * (1.0 - rng.random(n))
    a = ka / scattering.kinematics(E, V)[1]
    h = 1e-7
    tau = delay.relativistic_delay(E, V, a)
    fd = (scattering.phase_shift(E + h, V, a) - scattering.phase_shift(E - h, V, a)) / (2 * h)
    ratio = float(np.max(np.abs(tau - fd) / (1e-6 * np.maximum(np.abs(tau), 1.0))))
    report("5 derivative oracle", ratio <= 1.0, f"worst error/tolerance={ratio:.3f} over {n}", time.perf_counter() - t0, 5)


def test_criterion_6_low_energy_asymptotics():
    t0 = time.perf_counter()
    beta, gamma, alpha = 0.4, 0.01, 1.0 + 1e-6
    _, kp, c = (float(v) for v in scattering.kinematics(alpha, beta))
    ka = kp / gamma
    applicable = abs(1 / math.tan(ka)) > 0.1
    tau = float(delay.relativistic_delay(alpha, beta, 1 / gamma))
    lim = float(delay.low_energy_limit_delay(alpha, beta, ka))
    tau_err = abs(tau - lim) / abs(lim)
    T = scattering.transmission_probability(WellScenario(alpha, beta, 1 / gamma))
    T_err = abs(T - float(delay.low_energy_limit_transmission(c, ka))) / T
    ok = applicable and tau_err <= 1e-3 and T_err <= 1e-4
    detail = f"k'a={ka:.4f} (|cot|>0.1: {applicable}), tau rel err={tau_err:.1e}, T rel err={T_err:.1e}"
    report("6 low-energy asymptotics", ok, detail, time.perf_counter() - t0, 1)


@pytest.fixture(scope="module")
def packet_sweep():
    t0 = time.perf_counter()
    rows = []
    for x in np.linspace(0.2 * math.pi, 3 * math.pi, 21):
        a = scattering.width_for_kprime_a(E_REF, V_REF, x)
        spec = PacketSpec(E_REF, W_REF, V_REF, a)
        res = propagate_transmitted(spec)
        wide = propagate_transmitted(spec.replace(energy_window=(1.0 + 1e-12, 2.0)))
        rows.append(
            dict(
                x=x, a=a, res=res,
                theory=float(delay.relativistic_delay(E_REF, V_REF, a)),
                window_change=abs(wide.numerical_delay - res.numerical_delay),
                T=float(scattering.transmission(E_REF, V_REF, a)),
            )
        )
    return rows, time.perf_counter() - t0


def test_criterion_7_packet_agreement(packet_sweep):
    rows, seconds = packet_sweep
    bad = []
    for r in rows:
        gap = abs(r["res"].numerical_delay - r["theory"])
        tol = max(0.05 * abs(r["theory"]), 2.0)
        if gap > tol:
            bad.append(f"{r['x'] / math.pi:.2f}pi: {r['res'].numerical_delay:.2f} vs {r['theory']:.2f} (tol {tol:.2f})")
    detail = f"{len(rows) - len(bad)}/{len(rows)} widths within max(5%, 2 tau0)"
    if bad:
        detail += "; outside: " + "; ".join(bad)
    report("7 packet vs stationary phase", not bad, detail, seconds, 300)


def test_criterion_7_quadrature_doubling(packet_sweep):
    rows, _ = packet_sweep
    worst = max(r["res"].convergence_delta for r in rows)
    trace = max(r["res"].trace_change for r in rows)
    report("7 quadrature doubling", worst < 0.01, f"max delay change {worst:.1e} tau0 (trace sup change {trace:.1e})")


def test_criterion_7_window_widening(packet_sweep):
    rows, _ = packet_sweep
    worst = max(r["window_change"] for r in rows)
    report("7 energy-window widening", worst < 0.01, f"max delay change {worst:.1e} tau0 with window [1, 2]")


def test_criterion_8_validity(packet_sweep):
    rows, _ = packet_sweep
    L = rows[0]["res"].characteristic_length
    invalid = [f"{r['x'] / math.pi:.2f}pi" for r in rows if not r["res"].validity_ok]
    gated = [r for r in rows if r["T"] > 0.5]
    low_r2 = [f"{r['x'] / math.pi:.2f}pi" for r in gated if not r["res"].distortion >= 0.999]
    min_r2 = min(r["res"].distortion for r in gated)
    ok = abs(L - 211.5) <= 0.01 * 211.5 and not invalid and not low_r2
    detail = (
        f"L={L:.2f}, validity_ok at {len(rows) - len(invalid)}/{len(rows)} widths, "
        f"min R2={min_r2:.6f} over {len(gated)} widths with T>0.5"
    )
    report("8 validity", ok, detail)


def test_criterion_9_relativistic_excess():
    t0 = time.perf_counter()
    alpha, beta = 1.01, 0.2
    grid = np.linspace(0.1, 4 * math.pi, 1000)
    kp = scattering.kinematics(alpha, beta)[1]
    kn = delay.nonrel_wavenumbers(alpha, beta)[1]
    excess = delay.relativistic_delay(alpha, beta, grid / kp) - delay.nonrelativistic_delay(alpha, beta, grid / kn)
    neg = grid[excess < 0]
    detail = f"min excess {excess.min():.4f}, {neg.size}/1000 points negative"
    if neg.size:
        detail += f" in k'a [{neg.min() / math.pi:.3f}pi, {neg.max() / math.pi:.3f}pi]"
    report("9 relativistic delay >= non-relativistic", bool(neg.size == 0), detail, time.perf_counter() - t0, 5)


def test_criterion_9_nonrel_agreement():
    t0 = time.perf_counter()
    alpha, beta = 1.0 + 1e-5, 1e-4
    grid = np.linspace(0.1, 4 * math.pi, 1000)
    kp = scattering.kinematics(alpha, beta)[1]
    kn = delay.nonrel_wavenumbers(alpha, beta)[1]
    rel = delay.relativistic_delay(alpha, beta, grid / kp)
    nr = delay.nonrelativistic_delay(alpha, beta, grid / kn)
    gap = float(np.max(np.abs(rel - nr)) / np.max(np.abs(rel)))
    report("9 weak-field agreement", gap < 1e-3, f"sup-norm relative gap {gap:.1e}", time.perf_counter() - t0, 5)


def test_criterion_10_determinism(tmp_path):
    runs = [
        ("width-sweep", []),
        ("phase-sweep", []),
        ("energy-sweep", []),
        ("compare-nonrel", []),
        ("threshold-table", []),
        ("packet", ["--points", "3", "--jobs", "3"]),
    ]
    differing = []
    for mode, extra in runs:
        outputs = []
        for rep in ("a", "b"):
            out = tmp_path / rep / f"{mode}.csv"
            out.parent.mkdir(exist_ok=True)
            assert cli.main([mode, *extra, "--plot", "--out", str(out)]) == 0
            outputs.append((out.read_bytes(), out.with_suffix(".gp").read_bytes()))
        if outputs[0] != outputs[1]:
            differing.append(mode)
    detail = "byte-identical CSV and plot script on rerun for all modes" if not differing else f"differs: {differing}"
    report("10 determinism", not differing, detail)


def test_criterion_10_validate_exit_code(capsys):
    rc = cli.main(["validate"])
    lines = capsys.readouterr().out.splitlines()
    failed = [ln.split()[1] for ln in lines if ln.startswith("FAIL")]
    detail = f"validate exit code {rc}" + (f"; failing checks: {', '.join(failed)}" if failed else "")
    for ln in lines:
        print(ln)
    report("10 validate", rc == 0, detail)
