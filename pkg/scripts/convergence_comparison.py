"""Convergence comparison of the four main algorithms on one system.

Runs every algorithm on the same Hamiltonian/pool/seed and prints an aligned
error table (also written to out/compare_script/compare.csv).  Pass a config
path to compare on another system, e.g. the shipped H4 integrals.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gcim.cli import cmd_compare, load_config

DEFAULT = {
    "hamiltonian": {"toy": {"t": 1.0, "u": 2.0}},
    "algorithms": ["adapt-gcim", "adapt-vqe", "adapt-vqe-gcim", "adapt-vqe-gcim-1"],
    "adapt": {"t_usr": 5},
    "out_dir": "out/compare_script",
    "seed": 0,
}


def main() -> int:
    if len(sys.argv) > 1:
        cfg = load_config(sys.argv[1])
    else:
        import json
        import tempfile

        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            json.dump(DEFAULT, fh)
            path = fh.name
        cfg = load_config(path)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    status = cmd_compare(cfg)
    print((cfg.out_dir / "compare.csv").read_text())
    return status


if __name__ == "__main__":
    sys.exit(main())
