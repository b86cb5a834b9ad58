"""Corpus files: JSON simplicial sets, fibrations and CDGA model pairs.

Simplicial sets: {"schema": 1, "kind": "space", "name", "dims": {"0": [labels], ...},
"faces": {label: [[degeneracy word, target], ...]}}.  A word [j1, ..., jk] means
s_j1 ... s_jk applied to the target.

Fibrations: {"kind": "fibration", "map": {"source": space, "target": space,
"images": {label: [word, target]}}} or {"kind": "fibration", "construction":
{"type": ...}} for the generated ones (products, W G -> W-bar G, the path
fibration over K(Z/2,2), the clutching model of the Hopf map).

Model pairs: {"kind": "model", "base": cdga, "extension": {"generators": [...],
"d": {...}}, "fibration": corpus reference}.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional

from .simplicial import EZSet, SimplicialError, SimplicialMap, eta_to_word, word_to_eta

SCHEMA = 1
ENV_VAR = "ARTIFACT_CORPUS"
KINDS = ("space", "fibration", "model")


class CorpusError(ValueError):
    """Invalid or unreadable corpus input (reported with its location)."""


def corpus_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path(__file__).parent / "corpus"


def label_key(y) -> str:
    if isinstance(y, str):
        return y
    return repr(y).replace(" ", "")


# ---------------------------------------------------------------- spaces

def space_to_json(X: EZSet) -> Dict:
    keys = {y: label_key(y) for y in X.dim_of}
    if len(set(keys.values())) != len(keys):
        raise CorpusError(f"{X.name}: labels are not distinguishable as strings")
    dims = {str(n): [keys[y] for y in X.nd[n]] for n in sorted(X.nd)}
    faces = {keys[y]: [[eta_to_word(eta), keys[z]] for eta, z in fs] for y, fs in X.faces.items()}
    return {"schema": SCHEMA, "kind": "space", "name": X.name, "dims": dims, "faces": faces}


def space_from_json(data: Mapping, where: str = "<space>") -> EZSet:
    if not isinstance(data, Mapping) or "dims" not in data:
        raise CorpusError(f"{where}: missing 'dims'")
    try:
        nd = {int(n): list(v) for n, v in data["dims"].items()}
    except (TypeError, ValueError, AttributeError):
        raise CorpusError(f"{where}: 'dims' must map dimensions to label lists") from None
    dim_of = {y: n for n, ys in nd.items() for y in ys}
    faces = {}
    for y, fs in data.get("faces", {}).items():
        if y not in dim_of:
            raise CorpusError(f"{where}: faces given for unknown simplex {y!r}")
        out = []
        for i, item in enumerate(fs):
            try:
                word, z = item
                k = dim_of[z]
                eta = word_to_eta(word, k)
            except KeyError:
                raise CorpusError(f"{where}: faces[{y!r}][{i}] names an unknown simplex") from None
            except (TypeError, ValueError, SimplicialError) as e:
                raise CorpusError(f"{where}: faces[{y!r}][{i}]: {e}") from None
            out.append((eta, z))
        faces[y] = out
    try:
        return EZSet(nd, faces, data.get("name", "X"))
    except SimplicialError as e:
        raise CorpusError(f"{where}: {e}") from None


# ---------------------------------------------------------------- maps and fibrations

def map_to_json(f: SimplicialMap) -> Dict:
    X, Y = f.source, f.target
    images = {}
    for y in X.dim_of:
        eta, t = f.images[y]
        images[label_key(y)] = [eta_to_word(eta), label_key(t)]
    return {"source": space_to_json(X), "target": space_to_json(Y), "images": images}


def map_from_json(data: Mapping, where: str = "<map>") -> SimplicialMap:
    X = space_from_json(data["source"], f"{where}.source")
    Y = space_from_json(data["target"], f"{where}.target")
    images = {}
    for y in X.dim_of:
        item = data["images"].get(y)
        if item is None:
            raise CorpusError(f"{where}: no image for {y!r}")
        word, t = item
        if t not in Y.dim_of:
            raise CorpusError(f"{where}: image of {y!r} names an unknown simplex {t!r}")
        try:
            images[y] = (word_to_eta(word, Y.dim_of[t]), t)
        except SimplicialError as e:
            raise CorpusError(f"{where}: image of {y!r}: {e}") from None
        if len(images[y][0]) != X.dim_of[y] + 1:
            raise CorpusError(f"{where}: image of {y!r} has the wrong dimension")
    f = SimplicialMap(X, Y, images=images, name=data.get("name", "f"))
    bad = f.check(X.dim + 1)
    if bad:
        raise CorpusError(f"{where}: not a simplicial map ({bad})")
    return f


def fibration_from_json(data: Mapping, where: str = "<fibration>"):
    from . import fibrations as fb
    name = data.get("name", "fibration")
    if "map" in data:
        return fb.Fibration(name, map_from_json(data["map"], f"{where}.map"), data.get("note", ""))
    c = data.get("construction")
    if not isinstance(c, Mapping) or "type" not in c:
        raise CorpusError(f"{where}: needs 'map' or 'construction'")
    kind = c["type"]
    if kind == "product":
        B = resolve_entry(c["base"]).load()
        F = resolve_entry(c["fiber"]).load()
        return fb.product_fibration(B, F, name)
    if kind == "w":
        return fb.w_fibration(int(c.get("order", 2)), int(c.get("dim_cap", 6)))
    if kind == "kz2_path":
        return fb.kz2_path_fibration(int(c.get("dim_cap", 6)))
    if kind == "hopf_clutching":
        return fb.hopf_clutching(int(c.get("L", 3)), int(c.get("n", 3)))
    raise CorpusError(f"{where}: unknown construction {kind!r}")


# ---------------------------------------------------------------- entries

@dataclass
class CorpusEntry:
    name: str
    kind: str
    path: Optional[Path]
    window: Optional[int]
    data: Dict = field(repr=False, default_factory=dict)

    def load(self, F=None):
        where = str(self.path or self.name)
        if self.kind == "space":
            return space_from_json(self.data, where)
        if self.kind == "fibration":
            return fibration_from_json(self.data, where)
        from .linalg import QQ
        from .sullivan import ModelError, extension_from_json
        try:
            return extension_from_json(self.data, F or QQ)
        except (ModelError, KeyError, TypeError) as e:
            raise CorpusError(f"{where}: {e}") from None

    def fibration(self):
        """The fibration a model entry refers to."""
        if self.kind != "model":
            raise CorpusError(f"{self.name} is not a model pair")
        return resolve_entry(self.data["fibration"]).load()


def parse_entry(data, path: Optional[Path] = None) -> CorpusEntry:
    where = str(path or "<entry>")
    if not isinstance(data, Mapping):
        raise CorpusError(f"{where}: top level must be an object")
    if data.get("schema", SCHEMA) != SCHEMA:
        raise CorpusError(f"{where}: unsupported schema {data.get('schema')!r}")
    kind = data.get("kind", "space")
    if kind not in KINDS:
        raise CorpusError(f"{where}: unknown kind {kind!r}")
    window = data.get("window")
    return CorpusEntry(data.get("name", path.stem if path else "entry"), kind, path,
                       int(window) if window is not None else None, dict(data))


def load_entry(path) -> CorpusEntry:
    path = Path(path)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise CorpusError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise CorpusError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    return parse_entry(data, path)


def resolve_entry(ref: str) -> CorpusEntry:
    """A file path, or the name of a corpus file (with or without .json)."""
    p = Path(ref)
    if p.is_file():
        return load_entry(p)
    base = corpus_dir()
    for cand in (base / ref, base / f"{ref}.json"):
        if cand.is_file():
            return load_entry(cand)
    raise CorpusError(f"{ref}: not a file and not in the corpus at {base}")


def list_corpus() -> List[CorpusEntry]:
    return [load_entry(p) for p in sorted(corpus_dir().glob("*.json"))]


# ---------------------------------------------------------------- deterministic output

def plain(x):
    """Exact values as JSON-friendly objects (fractions become 'p/q' strings)."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    if isinstance(x, Mapping):
        return {str(k) if not isinstance(k, str) else k: plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    return str(x)


def dumps(obj) -> str:
    return json.dumps(plain(obj), sort_keys=True, indent=2)
