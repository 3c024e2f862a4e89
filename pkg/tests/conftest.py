from __future__ import annotations

from pathlib import Path

import pytest

from opsat.bench import DATA, MODELS
from opsat.pipeline import load_ground


def model_text(name: str) -> str:
    return (MODELS / f"{name}.tex").read_text(encoding="utf-8")


def data_text(name: str) -> str:
    return (DATA / f"{name}.dat").read_text(encoding="utf-8")


def ground(model: str, data: str = "", strict: bool = False):
    """Ground model text (or a shipped model name) against data text."""
    if not model.lstrip().startswith("\\begin"):
        model = model_text(model)
    gm, _ = load_ground(model, data, strict)
    return gm


def wrap(*lines: str) -> str:
    """Build a model file from align rows (first row is the objective)."""
    return "\\begin{align}\n" + " \\\\\n".join(lines) + "\n\\end{align}\n"


ALL_MODELS = sorted(p.stem for p in MODELS.glob("*.tex"))


@pytest.fixture
def tmp_files(tmp_path: Path):
    def write(name: str, text: str) -> str:
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write
