"""Smoke test for the dgtor_py extension module."""

import json

import dgtor_py as dg


def main():
    r = dg.Ring(["x", "y"], ["x^2", "x*y", "y^2"])
    assert r.dim == 3, r.labels
    k = r.koszul()
    assert k.homology_dims() == [1, 3, 2]
    assert k.algebra.detect()[0] == "CERTIFIED-k⋉W"

    res = r.algebra.residue_field()
    assert res.poincare(8) == [2**i for i in range(9)]
    assert res.certify_perfect(10) == "NOT-PERFECT"
    assert r.algebra.regular().certify_perfect(10) == "PERFECT"

    dual = dg.Ring(["x"], ["x^2"])
    t = dg.TrivialExtension(dual.algebra, [0])
    kb = t.restrict(dual.algebra.residue_field())
    assert kb.poincare(6) == [1, 2, 4, 8, 16, 32, 64]
    assert t.restrict(dual.algebra.regular()).poincare(5) == [1, 1, 2, 4, 8, 16]

    cubic = dg.Ring(["x"], ["x^3"])
    m, n = cubic.cyclic(["x"]), cubic.cyclic(["x^2"])
    assert m.tor(n, 0, 5) == [1] * 6

    session = {
        "field": "fp:101",
        "definitions": [
            {"name": "R", "kind": "ring", "vars": ["x"], "relations": ["x^2"]},
            {"name": "k", "kind": "residue", "over": "R"},
        ],
        "commands": [{"op": "poincare", "module": "k", "degree": 4}],
    }
    report = json.loads(dg.run_session(json.dumps(session)))
    assert report["schema"] == "dgtor/1"
    assert report["results"][0]["body"]["coefficients"] == [1, 1, 1, 1, 1]
    assert "max(3" in dg.explain("star")

    try:
        dg.Ring(["x"], [])
    except ValueError:
        pass
    else:
        raise AssertionError("infinite quotient accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
