#!/usr/bin/env python3
"""Smoke test for the `hbf` Python extension.

Builds nothing itself: expects the cdylib to exist (run
`cargo build -p hbf-py` or `cargo build -p hbf-py --release` first). The
module is loaded straight from the cargo target directory.

Usage: python3 python/smoke_test.py
"""

import json
import math
import random
import shutil
import sys
import tempfile
from pathlib import Path


def load_module():
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libhbf.so", "libhbf.dylib", "hbf.dll")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("hbf extension not found; run `cargo build -p hbf-py` first")
    stage = Path(tempfile.mkdtemp(prefix="hbf-py-"))
    target = stage / ("hbf" + (".pyd" if built.suffix == ".dll" else ".so"))
    shutil.copy2(built, target)
    sys.path.insert(0, str(stage))
    import hbf

    print(f"loaded {built}")
    return hbf


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    hbf = load_module()
    checks = 0

    # Steering vector: unit norm, flat at broadside.
    sv = hbf.array_response(4, 0.0)
    assert all(approx(z.real, 0.5) and approx(z.imag, 0.0, 1e-12) for z in sv), sv
    assert approx(sum(abs(z) ** 2 for z in sv), 1.0)
    checks += 1

    # Cluster powers: normalized geometric decay.
    powers = hbf.cluster_powers(10, 0.7)
    assert approx(sum(powers), 10.0, 1e-12)
    assert approx(powers[0], 10 * 0.3 / (1 - 0.7**10), 1e-12)
    checks += 1

    # Rank-1 candidate search equals brute force on random vectors.
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 10)
        q = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
        _, fast = hbf.maximize_rank1(q)
        _, brute = hbf.exhaustive_rank1(q)
        assert approx(fast, brute), (q, fast, brute)
    checks += 1

    # Channel generation: shape, determinism, JSON dump round trip.
    chan = hbf.generate_channel(16, 8, seed=42)
    assert chan.nt == 16 and chan.nr == 8
    again = hbf.generate_channel(16, 8, seed=42)
    assert chan.matrix() == again.matrix()
    dump = json.loads(chan.to_json())
    assert dump["nt"] == 16 and dump["nr"] == 8 and dump["seed"] == 42
    restored = hbf.channel_matrix_from_json(chan.to_json())
    assert restored == chan.matrix()
    checks += 1

    # Hybrid design: one-bit analog entries, normalized products, and the
    # full-digital benchmark dominating the constrained designs.
    h = chan.matrix()
    sys_cfg = hbf.SystemConfig(nt=16, nr=8, n_rf=2, ns=2, power=10.0, noise_var=1.0)
    bf = hbf.design_hybrid(h, sys_cfg)
    f_rf = bf.f_rf()
    mod = 1 / math.sqrt(16)
    assert all(abs(abs(z.real) - mod) < 1e-15 and z.imag == 0.0 for row in f_rf for z in row)
    fro2 = sum(abs(z) ** 2 for row in bf.precoder() for z in row)
    assert approx(fro2, 2.0, 1e-10)

    se = hbf.spectral_efficiency(h, bf, 10.0, 1.0)
    opt = hbf.full_digital_opt(h, sys_cfg)
    naive = hbf.naive_one_bit_baseline(h, sys_cfg)
    se_naive = hbf.spectral_efficiency(h, naive, 10.0, 1.0)
    assert 0.0 < se <= opt, (se, opt)
    assert se_naive > 0.0
    assert approx(hbf.spectral_efficiency(h, bf, 0.0, 1.0), 0.0, 1e-15)
    checks += 1

    # Monte-Carlo sweep: deterministic rows, sensible ordering.
    rows = hbf.run_monte_carlo("snr-sweep", hbf.SystemConfig(8, 8, 1, 1), trials=5, seed=3,
                               grid=[0.0, 10.0])
    rows2 = hbf.run_monte_carlo("snr-sweep", hbf.SystemConfig(8, 8, 1, 1), trials=5, seed=3,
                                grid=[0.0, 10.0])
    assert rows == rows2
    assert len(rows) == 6  # 2 grid points x {opt, proposed, naive-quant}
    by_alg = {(r["algorithm"], r["sweep_value"]): r["mean_se"] for r in rows}
    for snr in (0.0, 10.0):
        assert by_alg[("opt", snr)] > by_alg[("proposed", snr)] > 0.0
    checks += 1

    print(f"OK: {checks} smoke checks passed")


if __name__ == "__main__":
    main()
