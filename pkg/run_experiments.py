# run_experiments.py
# Runs every bundled experiment config in configs/ and writes the CSVs and figures
# under each config's OUTPUT_DIR. Intended for long unattended runs.

import logging
import os
import sys
from pathlib import Path

from config import ConfigError, load_config
from modules.simulation import SimulationError, run_experiment

logging.basicConfig(level=os.environ.get("AQM_LOG_LEVEL", "INFO"), format="%(asctime)s %(levelname)s %(message)s")
logger = logging.getLogger("run_experiments")

CONFIG_DIR = Path(__file__).parent / "configs"


def main(names=None) -> int:
    workers = int(os.environ.get("AQM_WORKERS", os.cpu_count() or 1))
    paths = sorted(CONFIG_DIR.glob("*.env"))
    if names:
        paths = [p for p in paths if p.stem in names]
    failures = 0
    for path in paths:
        logger.info("Starting experiment %s...", path.stem)
        try:
            written = run_experiment(load_config(path), workers=workers, progress=True)
        except (ConfigError, SimulationError) as exc:
            logger.error("Experiment %s failed: %s", path.stem, exc)
            failures += 1
            continue
        logger.info("Experiment %s complete (%d files).", path.stem, len(written))
    logger.info("All experiments processed; %d failed.", failures)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
