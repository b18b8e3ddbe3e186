"""Smoke test for the Python bindings.

Build and install first:
    pip install --no-build-isolation -e crates/python
then run `python python/smoke_test.py` from the repository root.
"""

import json
import pathlib
import sys

import tfmodlab

SCHEMAS = pathlib.Path(__file__).resolve().parent.parent / "schemas" / "v1"


def check_pairs():
    psi = [tfmodlab.PairModule.psi(2, t) for t in range(3)]
    for i, p in enumerate(psi):
        assert tfmodlab.indecomposable(p) == ("LocalCertified", "complete")
        assert not p.is_free()
        for j, q in enumerate(psi):
            assert tfmodlab.is_isomorphic(p, q) == (i == j)
            assert tfmodlab.hom_dim(p, q) == (2 if i == j else 0)

    total = psi[0] + tfmodlab.PairModule.free(1) + psi[2]
    assert total.n == 5
    factors = tfmodlab.decompose(total, seed=3)
    assert sorted(f.n for f in factors) == [1, 2, 2]

    again = tfmodlab.PairModule.from_json(psi[1].to_json())
    witness = tfmodlab.iso_witness(psi[1], again)
    assert witness is not None and len(witness) == 2
    assert tfmodlab.iso_witness(psi[0], psi[1]) is None


def check_semigroups():
    s = tfmodlab.NumericalSemigroup([3, 7])
    assert s.frobenius() == 11
    assert s.gaps() == [1, 2, 4, 5, 8, 11]
    assert 10 in s and 11 not in s
    dr = s.dr_check()
    assert dr["overmodule_min_gens"] == 2 and not dr["dr2"]
    try:
        tfmodlab.NumericalSemigroup([4, 6]).frobenius()
    except tfmodlab.TfmodlabError:
        pass
    else:
        raise AssertionError("non-coprime generators accepted")
    assert tfmodlab.coprime_obstruction(4, 6) == {"gcd": 2, "closure_fails": True}


def check_cli():
    code, text = tfmodlab.run(["psi", "--n", "2", "--t", "0,1,2", "--seed", "5"])
    assert code == 0
    report = json.loads(text)
    assert report["result"]["pairwise_nonisomorphic"] is True
    assert tfmodlab.run(["psi", "--n", "2", "--t", "0,1,2", "--seed", "5"]) == (code, text)

    p = tfmodlab.PairModule.psi(3, 1).to_json()
    code, text = tfmodlab.run(["iso"], json.dumps({"p": json.loads(p), "q": json.loads(p)}))
    assert code == 0 and json.loads(text)["result"]["isomorphic"] is True

    code, _ = tfmodlab.run(["semigroup", "--gens", "4,6"])
    assert code == 2
    return report, json.loads(p)


def check_schemas(report, pair):
    try:
        from jsonschema import Draft202012Validator
        from referencing import Registry, Resource
    except ImportError:
        print("jsonschema not installed; schema checks skipped")
        return
    docs = {f.name: json.loads(f.read_text()) for f in SCHEMAS.glob("*.json")}
    registry = Registry().with_resources(
        (d["$id"], Resource.from_contents(d)) for d in docs.values()
    )

    def validate(name, doc):
        Draft202012Validator(docs[name], registry=registry).validate(doc)

    validate("report.schema.json", report)
    validate("decompose.schema.json", pair)
    validate("iso.schema.json", {"p": pair, "q": pair})


def main():
    check_pairs()
    check_semigroups()
    report, pair = check_cli()
    check_schemas(report, pair)
    print("smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
