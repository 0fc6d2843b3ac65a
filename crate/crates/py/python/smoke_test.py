"""Smoke test for the monogen_py extension module.

Build the module first, e.g. `maturin develop` inside crates/py, or copy
target/release/libmonogen_py.so to monogen_py.so somewhere on sys.path.
"""

import monogen_py as m


def main():
    fam = m.FamilyParams(5, 5)
    assert fam.n == 5 and fam.a == 5
    coeffs = fam.build()
    assert coeffs == m.build(5, 5)
    assert len(coeffs) == 11 and coeffs[0] == 1 and coeffs[-1] == 1

    disc = m.disc_closed_form(5, 5)
    assert disc == -(5**18) * 27 * 37
    assert disc == fam.disc() == m.discriminant_via_resultant(coeffs)

    assert m.dedekind_generic(coeffs, 3)
    assert m.dedekind_generic(coeffs, 3, lift="symmetric")
    assert not m.dedekind_generic(coeffs, 37)

    verdict = m.classify_prime(5, 5, 3)
    assert verdict["divides_index"] and verdict["case_tag"] == "odd_tail"

    report = m.analyze(5, 5, cross_check=True)
    assert report["index"] == {"kind": "exact", "value": "3"}
    assert report["monogenic"]["verdict"] == "no"
    assert report["cross_check"]["mismatches"] == []

    rows = {r["p"]: r for r in m.fp_table(50)}
    assert rows[7]["index"]["value"] == "33"
    assert rows[47]["index"]["value"] == "5" and rows[47]["notes"]

    fr = m.factor(2**47 + 47)
    assert {"prime": "5", "exponent": 3} in fr["factors"]
    assert m.is_probable_prime(2**127 - 1)
    assert "(mod 3)" in m.factor_mod(5, 5, 3)["display"]

    for bad in (lambda: m.FamilyParams(2, 0), lambda: m.classify_prime(5, 5, 11)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("monogen_py smoke test passed")


if __name__ == "__main__":
    main()
