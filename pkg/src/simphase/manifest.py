"""Loader for the acceptance manifest (desk-scale tolerance bands)."""

from __future__ import annotations

import json
from importlib import resources


def load_manifest() -> dict:
    """Tolerances for the acceptance suite, as shipped with the package."""
    path = resources.files("simphase").joinpath("data/acceptance_manifest.json")
    return json.loads(path.read_text())
