"""
CLI - Artifact Registry

Tracks the files each subcommand writes during one invocation.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.services.io_service import dumps, write_csv, write_json, write_text
from src.schemas import OutputSpec

artifacts: Dict[str, List[str]] = {}


def add_artifact(command: str, path: Path):
    """Record a written file for a subcommand."""
    artifacts.setdefault(command, []).append(str(path))


def get_artifacts(command: str) -> List[str]:
    """Files written by a subcommand, in write order."""
    return artifacts.get(command, [])


def clear_artifacts(command: Optional[str] = None):
    if command is None:
        artifacts.clear()
    else:
        artifacts.pop(command, None)


def emit_json(command: str, output: OutputSpec, payload: Any) -> str:
    """Write the JSON report when requested; return its text for stdout."""
    text = dumps(payload)
    if output.json_path is not None:
        add_artifact(command, write_json(output.json_path, payload))
    return text


def emit_csv(command: str, output: OutputSpec, header: Sequence[str], rows) -> None:
    if output.csv_path is not None:
        add_artifact(command, write_csv(output.csv_path, header, rows))


def emit_svg(command: str, output: OutputSpec, svg: str) -> None:
    if output.svg_path is not None:
        add_artifact(command, write_text(output.svg_path, svg))
