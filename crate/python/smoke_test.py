#!/usr/bin/env python3
"""Smoke test for the blindsim Python module.

Builds the extension with cargo if needed, imports it, and checks the
headline results: the power-budget table, the perfect-attack window, a
window violation, and the watchdog feasibility interval.

Usage: python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_and_import():
    lib = REPO / "target" / "release" / "libblindsim.so"
    if not lib.exists():
        print("building blindsim-py (release)...")
        subprocess.run(
            ["cargo", "build", "--release", "-p", "blindsim-py"],
            cwd=REPO,
            check=True,
        )
    tmp = Path(tempfile.mkdtemp(prefix="blindsim-py-"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy2(lib, tmp / f"blindsim{suffix}")
    shutil.copy2(lib, tmp / "blindsim.so")
    sys.path.insert(0, str(tmp))
    import blindsim

    return blindsim


def check(name, condition, detail=""):
    if condition:
        print(f"PASS {name}")
    else:
        print(f"FAIL {name} {detail}")
        sys.exit(1)


def main():
    bs = build_and_import()
    print(f"blindsim {bs.__version__}")

    # Optics helpers.
    check("db_to_linear(6.4) = 4.3652", abs(bs.db_to_linear(6.4) - 4.36515832240166) < 1e-9)
    check(
        "pulse energy 258 nW @ 10 MHz = 25.8 fJ",
        abs(bs.pulse_energy_fj(258.0, 1e7) - 25.8) < 1e-9,
    )
    check(
        "click probability mu=1, eta=0.1",
        abs(bs.click_probability(1.0, 0.1) - (1.0 - math.exp(-0.1))) < 1e-12,
    )

    # Budget table.
    rows = bs.budget_rows()
    check(
        "budget stages",
        [r.stage for r in rows]
        == ["at_subcarriers_after_filtering", "before_modulation", "entering_bob"],
    )
    check("budget before modulation = 700 nW", round(rows[1].blinding_power_nw) == 700)
    check("budget entering Bob = 3056 nW", abs(round(rows[2].blinding_power_nw) - 3056) <= 1)
    check("budget E_always entering Bob", abs(round(rows[2].e_always_fj) - 2252) <= 1)

    # Perfect attack: zero QBER, full Eve information, across seeds.
    scenario = bs.default_scenario_toml()
    for seed in (1, 2, 3):
        stats = bs.run_toml(scenario, seed=seed, gates=200_000)
        check(
            f"perfect attack seed {seed}: QBER 0, Eve knows all",
            stats.qber == 0.0
            and stats.eve_known_fraction == 1.0
            and stats.double_clicks == 0
            and stats.wrong_basis_clicks == 0,
            repr(stats),
        )

    # Trigger energy above 2*E_never leaks errors.
    broken = scenario.replace("trigger_energy_fj = 25.8", "trigger_energy_fj = 35.0")
    stats = bs.run_toml(broken, seed=5, gates=500_000)
    check(
        "window violation raises QBER",
        stats.qber is not None and stats.qber > 0.05 and stats.wrong_basis_clicks > 0,
        repr(stats),
    )

    # Response curve plateaus.
    points = bs.sweep_toml(scenario, "trigger_energy_fj", 10.0, 35.0, 26, gates=20_000)
    low = [p for p in points if p.value <= 15.4]
    high = [p for p in points if p.value >= 25.8]
    check(
        "sweep plateaus at 0 and 1",
        all(p.click_probability == 0.0 for p in low)
        and all(p.click_probability == 1.0 for p in high),
    )

    # Watchdog feasibility window, solved by hand: [0, 23.6] dB.
    window = bs.find_attenuation_window(1000.0, 3055.610825681162, 1.0, 1000.0, 6.4)
    check(
        "attenuation window [0, 23.6] dB",
        window is not None and abs(window[0]) < 0.01 and abs(window[1] - 23.6) < 0.01,
        repr(window),
    )

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
