"""JSON configuration: field, curve, class data, search limits and witness hints."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from .certify import ClassData, Hints, SearchConfig
from .ellcurve import CurveModel
from .numberfield import NumberField


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    raw: dict
    field: NumberField
    curve: Optional[CurveModel]
    class_data: Optional[ClassData]
    search: SearchConfig
    hints: Hints
    mode: str


def build_field(obj: dict) -> NumberField:
    K = NumberField([int(c) for c in obj["poly"]], obj.get("integral_basis"),
                    label=obj.get("label", ""), name=obj.get("name", "a"))
    spl = obj.get("index_prime_splittings", {})
    K.index_splittings = {int(p): v for p, v in spl.items()}
    return K


def build_curve(K: NumberField, obj: dict) -> CurveModel:
    if "roots" in obj:
        e1, e2, e3 = (K.element(r) for r in obj["roots"])
        return CurveModel.from_roots(K, e1, e2, e3)
    a = [K.element(x) for x in obj["ainvs"]]
    if len(a) != 5:
        raise ConfigError("ainvs needs five entries")
    return CurveModel(K, *a)


def parse(raw: dict) -> Config:
    try:
        K = build_field(raw["field"])
        E = build_curve(K, raw["curve"]) if "curve" in raw else None
        cd = ClassData.from_json(K, raw["class_data"]) if "class_data" in raw else None
        return Config(raw, K, E, cd, SearchConfig.from_json(raw.get("search")),
                      Hints.from_json(K, raw.get("hints")), raw.get("mode", "full2tors"))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"malformed config: {e!r}") from e


def load(path: str | Path) -> Config:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(str(e)) from e
    return parse(raw)


def bundled(name: str) -> dict[str, Any]:
    """A config shipped in adelicert/data."""
    return json.loads(resources.files("adelicert").joinpath("data", name).read_text())
