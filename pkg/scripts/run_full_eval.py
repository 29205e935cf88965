#!/usr/bin/env python3
"""Run the whole evaluation battery and collect reports under results/.

Trains the toy pipeline once, saves the checkpoint, then runs every CLI
verb against it.  Everything is seeded, so reruns reproduce the same
reports byte for byte (timing numbers aside).
"""

import json
import sys
from pathlib import Path

from cloudcat.cli import main

RESULTS = Path(__file__).resolve().parent.parent / "results"
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(argv):
    print(f"$ cloudcat {' '.join(argv)}", file=sys.stderr)
    code = main(argv)
    if code != 0:
        print(f"  -> exit {code}", file=sys.stderr)
    return code


def show_summary(path):
    doc = json.loads(Path(path).read_text())
    for row in doc["aggregates"]:
        print(
            f"  {row['method']:8s} {row['kind']:10s} level={row['level']:<8g} "
            f"{row['metric']}: mean={row['mean']:.4g} max={row['max']:.4g} "
            f"(n={row['count']})"
        )


if __name__ == "__main__":
    RESULTS.mkdir(exist_ok=True)
    seed = sys.argv[1] if len(sys.argv) > 1 else "0"
    checkpoint = RESULTS / "toy_checkpoint.npz"

    toy_cfg = json.loads((CONFIGS / "toy_e2e.json").read_text())
    toy_cfg["checkpoint_out"] = str(checkpoint)
    patched = RESULTS / "toy_e2e_config.json"
    patched.write_text(json.dumps(toy_cfg, indent=2))

    failures = 0
    failures += run(
        ["toy-e2e", "--config", str(patched), "--seed", seed,
         "--out", str(RESULTS / "toy_e2e.json")]
    )
    failures += run(
        ["verify-invariance", "--config", str(CONFIGS / "invariance.json"),
         "--seed", seed, "--out", str(RESULTS / "invariance.json")]
    )
    robust_cfg = json.loads((CONFIGS / "robustness.json").read_text())
    robust_cfg["checkpoint"] = str(checkpoint)
    patched_robust = RESULTS / "robustness_config.json"
    patched_robust.write_text(json.dumps(robust_cfg, indent=2))
    failures += run(
        ["robustness", "--config", str(patched_robust), "--seed", seed,
         "--out", str(RESULTS / "robustness.json")]
    )
    failures += run(
        ["bench-time", "--config", str(CONFIGS / "bench_time.json"),
         "--seed", seed, "--out", str(RESULTS / "bench_time.json")]
    )

    for name in ("toy_e2e", "invariance", "robustness", "bench_time"):
        print(f"\n=== {name} ===")
        show_summary(RESULTS / f"{name}.json")

    sys.exit(1 if failures else 0)
