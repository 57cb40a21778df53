"""Argument lists pinned by the golden files, and a writer to regenerate them.

Run ``python tests/golden_cases.py`` after an intentional output change.
"""
import json
from pathlib import Path

from motivic_hurwitz.cli import run

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "class": [["class", "--d", str(d), "--g", str(g), "--ramification", r]
              for d in (2, 3, 4, 5) for g in (5, 10, 20) for r in ("all", "simple")],
    "mass": [["mass", "--d", str(d)] for d in range(1, 11)]
            + [["mass", "--d", str(d), "--ramification", "simple"] for d in range(2, 11)],
    "tamagawa": [["tamagawa", "--rank", str(n), "--deg", str(delta), "--codim", str(N)]
                 for n, N in ((2, 12), (3, 8)) for delta in range(n)],
    "bsn": [["bsn", "--n", str(n)] for n in range(2, 7)],
}


def render(argv):
    code, out, err = run(argv + ["--format", "json"])
    assert code == 0, err
    return [json.loads(line) for line in out.splitlines()]


def write_all():
    GOLDEN.mkdir(exist_ok=True)
    for name, cases in CASES.items():
        data = {" ".join(argv): render(argv) for argv in cases}
        (GOLDEN / f"{name}.json").write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    write_all()
