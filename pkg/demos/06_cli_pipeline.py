"""The whole pipeline through the command line, in a temporary directory.

synth -> stats -> train (split, fit, tune) -> eval -> predict -> cooc.
Every command is deterministic given its flags; run this twice and the
model file bytes will not change.
"""

import subprocess
import sys
import tempfile
from pathlib import Path


def run(*args):
    cmd = [sys.executable, "-m", "memechain.cli", *args]
    print(f"$ memechain {' '.join(args)}")
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.stdout:
        print(proc.stdout.rstrip())
    if proc.returncode != 0:
        print(proc.stderr.rstrip())
        raise SystemExit(proc.returncode)
    print()


with tempfile.TemporaryDirectory() as tmp:
    base = Path(tmp)
    data, tax = base / "data.jsonl", base / "taxonomy.txt"
    model, report, preds = base / "model.json", base / "report.txt", base / "preds.jsonl"

    run("synth", "--out", str(data), "--taxonomy-out", str(tax),
        "--n", "500", "--dim", "8", "--labels", "4",
        "--correlation", "0.8", "--noise", "0.1", "--seed", "42",
        "--augment", "2", "0.2")
    run("stats", "--taxonomy", str(tax), "--data", str(data))
    run("train", "--taxonomy", str(tax), "--train", str(data), "--model", str(model),
        "--seed", "1")
    run("eval", "--taxonomy", str(tax), "--model", str(model), "--data", str(data),
        "--report", str(report))
    run("predict", "--taxonomy", str(tax), "--model", str(model), "--data", str(data),
        "--out", str(preds))
    run("cooc", "--taxonomy", str(tax), "--data", str(data), "--out", str(base / "cooc.csv"))

    print("metrics report head:")
    print("\n".join(report.read_text().splitlines()[:6]))
    print("\nfirst prediction record:")
    print(preds.read_text().splitlines()[0][:120], "...")
