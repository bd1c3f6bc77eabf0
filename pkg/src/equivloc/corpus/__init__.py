"""Bundled worked-example documents."""

from importlib import resources
from pathlib import Path

from ..io import InputDocument, load_document

NAMES = ("cp1", "cp2", "cp3", "cp4_t2", "ex1a", "hirzebruch_nonunique", "so5_reduced")


def path(name: str) -> Path:
    if name not in NAMES:
        raise KeyError(f"no corpus document {name!r}; have {', '.join(NAMES)}")
    return Path(str(resources.files(__package__) / f"{name}.json"))


def load(name: str) -> InputDocument:
    return load_document(path(name))


def load_all():
    return {name: load(name) for name in NAMES}
