"""JSON Schemas for the documents printed by ``cavs ... --json``."""
from __future__ import annotations

import json
from importlib import resources


def load_schema(command: str) -> dict:
    """Schema for a command name such as ``"backdoor-sets"`` or ``"cpdag-orient"``."""
    name = command.replace("-", "_") + ".json"
    return json.loads(resources.files(__name__).joinpath(name).read_text(encoding="utf-8"))
