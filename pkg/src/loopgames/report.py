"""Machine-readable documents for check results, with a shipped JSON schema."""

from __future__ import annotations

import json
from importlib import resources
from typing import Mapping

from .analysis import EquilibriumReport

ARTIFACT_VERSION = "0.1.0"


def report_document(model_name: str, report: EquilibriumReport,
                    at: Mapping[str, int] | None = None) -> dict:
    """Flatten a report into the documented JSON shape."""
    witness = None
    if report.witness is not None:
        w = report.witness
        witness = {
            "agent": w.agent,
            "path": [{"node": node, "choice": side} for node, side in w.path],
            "leaf": w.leaf,
            "flips": list(w.flips),
            "valuation": dict(w.valuation) if w.valuation is not None else None,
        }
    return {
        "artifact_version": ARTIFACT_VERSION,
        "model": model_name,
        "check": report.check,
        "verdict": report.verdict.value,
        "at": dict(at) if at else {},
        "witness": witness,
        "conditions": [
            {
                "node": c.node,
                "lhs": c.lhs.render(),
                "rel": c.rel,
                "rhs": c.rhs.render(),
                "verdict": c.result.truth.value,
                "witness": dict(c.result.witness) if c.result.witness else None,
            }
            for c in report.conditions
        ],
    }


def dumps_report(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def load_schema() -> dict:
    text = resources.files("loopgames").joinpath("report.schema.json").read_text()
    return json.loads(text)
