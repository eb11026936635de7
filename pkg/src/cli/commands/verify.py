"""
CLI - Verify Command

Runs the bundled example matrix and prints the pass/fail table.
"""

import sys

from src.cli.outputs import emit_json
from src.schemas import RunConfig
from src.services.verify_service import format_table, run_verification


def execute(config: RunConfig) -> int:
    table = run_verification(seed=config.rng_seed, eta=config.eta, threads=config.threads)
    text = emit_json("verify", config.output, table)
    if config.output.json_path is None:
        print(text, end="")
    sys.stderr.write(format_table(table))
    return 0 if table.passed else 1
