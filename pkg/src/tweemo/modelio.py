"""Save/load dispatch for the persisted classifier JSON files."""

from __future__ import annotations

from .bayes import GaussianNbModel, MultinomialNbModel
from .jsonio import dump_canonical, load
from .svm import SvmModel

_KINDS = {
    "svm": SvmModel,
    "mnb": MultinomialNbModel,
    "gnb": GaussianNbModel,
}


class ModelIoError(Exception):
    pass


def save_model(model, path) -> None:
    dump_canonical(model.to_dict(), path)


def load_model(path):
    obj = load(path)
    kind = obj.get("kind") if isinstance(obj, dict) else None
    cls = _KINDS.get(kind)
    if cls is None:
        raise ModelIoError(f"{path}: unknown model kind {kind!r}")
    return cls.from_dict(obj)
