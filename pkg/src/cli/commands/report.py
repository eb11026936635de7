"""
CLI - Report Command

Aggregates the JSON artifacts found in a directory into one summary.
Besides the JSON report, a plain-text summary.txt is written into the
scanned directory and recorded as an artifact.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict

from src.cli.outputs import add_artifact, emit_json
from src.errors import MisuseError
from src.schemas import RunConfig
from src.services.io_service import list_json, write_text

logger = logging.getLogger(__name__)


def summarize(data: Dict[str, Any]) -> Dict[str, Any]:
    """Headline numbers of one artifact, keyed by what it contains."""
    if "sigma_hat" in data:
        return {"kind": "sigma", "poly": data.get("poly"), "sigma_hat": data["sigma_hat"], "valid": data.get("valid")}
    if "summary" in data and "q" in data:
        summary = data["summary"]
        return {"kind": "divide", "poly": summary.get("poly"), "N": summary.get("N"), "residual_zero": summary.get("residual_zero")}
    if "assumptions" in data:
        return {"kind": "gamma", "n_points": data.get("n_points"), "failure_reason": data["assumptions"].get("failure_reason")}
    if "checks" in data:
        return {"kind": "verify", "passed": data.get("passed"), "n_failed": data.get("n_failed")}
    if "regularity" in data:
        return {"kind": "seq", "log_convex": data["regularity"].get("log_convex")}
    return {"kind": "unknown"}


def execute(config: RunConfig) -> int:
    if config.report_dir is None:
        raise MisuseError("--report-dir is required for report")
    entries = []
    for path in list_json(config.report_dir):
        if config.output.json_path is not None and path.resolve() == Path(config.output.json_path).resolve():
            continue
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError:
            logger.warning("skipping unreadable %s", path)
            continue
        entries.append({"file": path.name, **summarize(data)})

    payload = {"directory": str(config.report_dir), "artifacts": entries}
    print(emit_json("report", config.output, payload), end="")
    lines = [f"{e['file']}: " + ", ".join(f"{k}={v}" for k, v in e.items() if k != "file") for e in entries]
    add_artifact("report", write_text(Path(config.report_dir) / "summary.txt", "\n".join(lines) + "\n"))
    return 0
