#!/usr/bin/env python3
"""Freeze the reference run of the four-model experiment.

Runs the full pipeline at default settings (seed 42, train 200 / test 20,
100 rounds, depth 3) on the bundled corpora and records each model's test
accuracy and top-3 global-summary features into
tests/fixtures/runall_reference.json. The acceptance suite re-runs the
pipeline and checks it against this frozen record.

Run from the repo root:  python scripts/oracles/runall_reference.py
"""

import json
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
OUT = ROOT / "tests" / "fixtures" / "runall_reference.json"


def main():
    from deceptlens.cli import main as cli_main

    with tempfile.TemporaryDirectory() as tmp:
        code = cli_main(["--out-dir", tmp, "--seed", "42", "run-all"])
        assert code == 0, f"run-all failed with exit code {code}"
        reference = {}
        for tag in ("EN", "FB", "POS", "NEG"):
            model_dir = Path(tmp) / f"DIS+{tag}"
            metrics = json.loads((model_dir / "metrics.json").read_text())
            summary = json.loads((model_dir / "summary.json").read_text())
            reference[f"DIS+{tag}"] = {
                "accuracy": metrics["accuracy"],
                "top3": [entry["feature"] for entry in summary["ranking"][:3]],
            }

    OUT.write_text(json.dumps(reference, indent=2) + "\n")
    for name, entry in reference.items():
        print(f"{name}: accuracy {entry['accuracy']:.2f}, top3 {entry['top3']}")


if __name__ == "__main__":
    main()
