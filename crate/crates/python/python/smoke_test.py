import math

import topodyn_py as td


def main():
    assert "cat-map" in td.catalog()

    dec = td.decompose_shift(["1100", "1100", "0011", "0011"])
    assert dec["verdict"] == "pass", dec["text"]
    assert dec["header"]["basic_sets"] == "2"

    perm = td.decompose_permutation([1, 2, 0, 4, 3])
    assert perm["header"]["basic_sets"] == "2"

    c = td.tracing_constant([[2.0, 1.0], [1.0, 1.0]])
    assert abs(c - math.sqrt(5.0)) < 1e-9

    tr = td.trace_torus([[2, 1], [1, 1]], (0.3, 0.6), 1e-3, 40, seed=3)
    assert tr["verdict"] == "pass"
    assert len(tr["orbit"]) == len(tr["pseudo_orbit"]) == 40
    assert max(tr["gaps"]) <= c * 1e-3

    again = td.parse_report(tr["text"])
    assert again["header"] == tr["header"]

    for name in ["ex22", "ex23", "sec5"]:
        rep = td.demo(name)
        assert rep["exit_code"] == 0, rep["text"]

    try:
        td.decompose_shift(["12"])
    except ValueError:
        pass
    else:
        raise AssertionError("malformed rows accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
