"""Regenerate the bundled corpus JSON files from the constructors."""
import argparse
import json
from pathlib import Path

from artifact.fibrations import hopf_clutching
from artifact.io import SCHEMA, corpus_dir, map_to_json, space_to_json
from artifact.simplicial import boundary_simplex, circle_1, point, product, rp2, standard_simplex

HOPF_BASE = {"generators": [{"name": "e", "degree": 2}, {"name": "x", "degree": 3}], "d": {"x": "e^2"}}


def spaces():
    yield "point", point()
    for n in range(1, 5):
        yield f"delta{n}", standard_simplex(n)
        yield f"delta{n}-boundary", boundary_simplex(n)
    yield "rp2", rp2()
    yield "circle", circle_1()
    S = circle_1()
    T = product(S, S)
    T.name = "S1xS1"
    yield "torus", T


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(corpus_dir()))
    out = Path(ap.parse_args().out)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for name, X in spaces():
        d = space_to_json(X)
        d["window"] = X.dim
        files[name] = d
    hopf = hopf_clutching()
    files["hopf"] = {"schema": SCHEMA, "kind": "fibration", "name": "hopf", "window": 4, "simple": True,
                     "note": hopf.note, "map": map_to_json(hopf.f)}
    files["product"] = {"schema": SCHEMA, "kind": "fibration", "name": "S2xS1->S2", "window": 4, "simple": True,
                        "construction": {"type": "product", "base": "delta3-boundary", "fiber": "circle"}}
    files["w-z2"] = {"schema": SCHEMA, "kind": "fibration", "name": "W(Z/2)->Wbar(Z/2)", "window": 4,
                     "simple": False, "construction": {"type": "w", "order": 2, "dim_cap": 6}}
    files["kz2-path"] = {"schema": SCHEMA, "kind": "fibration", "name": "K(Z/2,1)->WG->K(Z/2,2)", "window": 4,
                         "simple": True, "construction": {"type": "kz2_path", "dim_cap": 6}}
    files["hopf-model"] = {"schema": SCHEMA, "kind": "model", "name": "hopf-model", "window": 4,
                           "fibration": "hopf", "base": HOPF_BASE,
                           "extension": {"generators": [{"name": "v", "degree": 1}], "d": {"v": "e"}}}
    files["product-model"] = {"schema": SCHEMA, "kind": "model", "name": "product-model", "window": 4,
                              "fibration": "product", "base": HOPF_BASE,
                              "extension": {"generators": [{"name": "v", "degree": 1}], "d": {}}}
    for name, d in files.items():
        (out / f"{name}.json").write_text(json.dumps(d, sort_keys=True, indent=1) + "\n")
    print(f"wrote {len(files)} files to {out}")


if __name__ == "__main__":
    main()
