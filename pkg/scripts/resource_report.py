"""CNOT-cost report: run adapt-gcim on the toy model, then replay the trace
into per-iteration gate counts at each error level (all four schemes)."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import json
import tempfile

from gcim.cli import cmd_resources, cmd_run, load_config

CONFIG = {
    "hamiltonian": {"toy": {"t": 1.0, "u": 2.0}},
    "algorithms": ["adapt-gcim"],
    "adapt": {"t_usr": 5},
    "out_dir": "out/resource_script",
    "seed": 0,
}


def main() -> int:
    if len(sys.argv) > 1:
        cfg = load_config(sys.argv[1])
    else:
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            json.dump(CONFIG, fh)
            path = fh.name
        cfg = load_config(path)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    cmd_run(cfg)
    status = cmd_resources(cfg, cfg.out_dir / "trace.jsonl")
    print((cfg.out_dir / "resources.csv").read_text())
    return status


if __name__ == "__main__":
    sys.exit(main())
