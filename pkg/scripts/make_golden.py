"""Regenerate the CLI golden files in tests/golden/.

Each run is stored as <name>.json (stdout, byte for byte) and listed in
manifest.json with its arguments and exit code. Only rerun this after an
intentional output change, and review the diff.
"""
import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"

RUNS = [
    ("example", ["validate"]),
    ("example", ["globalize-set", "--verify-witness"]),
    ("example", ["check-algebra"]),
    ("example", ["check-semigroup", "--verify-witness"]),
    ("example", ["check-semigroup", "--all-violations"]),
    ("example", ["normalize", "--word", "[1,v][1,t]"]),
    ("example", ["normalize", "--word", "[1,t][1,u][x,t]"]),
    ("example", ["find-witness", "--max-len", "3", "--verify-witness"]),
    ("example", ["unital-globalize"]),
    ("example", ["amalgam", "--max-len", "3", "--verify-witness"]),
    ("unital01", ["validate"]),
    ("unital01", ["globalize-set"]),
    ("unital01", ["check-semigroup"]),
    ("unital01", ["find-witness"]),
    ("unital01", ["unital-globalize"]),
    ("unital01", ["amalgam", "--verify-witness"]),
    ("shift_z4", ["validate"]),
    ("shift_z4", ["globalize-set", "--verify-witness"]),
    ("shift_z4", ["check-algebra"]),
    ("swap_relation", ["validate"]),
    ("swap_relation", ["globalize-set"]),
    ("swap_relation", ["check-algebra"]),
]


def run(instance: str, args: list[str]) -> tuple[int, bytes]:
    cmd = [sys.executable, "-m", "partglob", args[0], f"corpus/{instance}.json", *args[1:]]
    proc = subprocess.run(cmd, cwd=ROOT, capture_output=True, check=False)
    return proc.returncode, proc.stdout


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    manifest = []
    for k, (instance, args) in enumerate(RUNS):
        code, out = run(instance, args)
        name = f"{k:02d}_{instance}_{args[0]}"
        (GOLDEN / f"{name}.json").write_bytes(out)
        manifest.append({"name": name, "instance": instance, "args": args, "exit": code})
        print(f"{name}: exit {code}")
    (GOLDEN / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
