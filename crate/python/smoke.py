"""Smoke test for the pydillonlab extension.

Build and install it first:
    maturin develop -m crates/python/Cargo.toml
or
    maturin build -m crates/python/Cargo.toml && pip install target/wheels/pydillonlab-*.whl
"""
import pydillonlab as dl


def main():
    gf = dl.Field(8, 0x11B)
    assert gf.mul(0x57, 0x83) == 0xC1
    assert gf.mul(gf.inv(0x53), 0x53) == 1
    assert dl.Field(3).modulus == 0xB

    g = dl.Vbf.gold(5, 1)
    assert (g.n, g.m, len(g)) == (5, 5, 32)
    assert g.degree() == 2 and g.is_quadratic() and g.is_apn()
    assert g.differential_uniformity() == 2
    assert g.walsh_row(0)[0] == 32
    assert sum(g.ddt_row(1)) == 32
    report = dl.d_check(g, witnesses=True)
    assert report["schema"] == "dreport/1"
    assert report["verdict"] == "d-function"
    for value, w in report["witnesses"].items():
        a, b, x = (int(w[k], 16) for k in "abx")
        assert g.normalize().second_derivative(a, b, x) == int(value, 16)

    f7 = dl.Vbf.from_spec("gold:n=7,i=1,restrict=t0")
    assert (f7.n, f7.m) == (6, 7)
    r7 = dl.d_check(f7, method="bruteforce")
    assert r7["verdict"] == "not-d-function" and r7["missing_total"] > 0

    cube = dl.Vbf.gold(7, 1)
    same = cube.restrict(dl.Field(7).trace_zero_basis())
    assert same.table == f7.table

    zero = dl.Vbf(2, 2, [0, 0, 0, 0])
    assert zero.degree() == 0 and dl.d_check(zero)["covered"] == 1

    for method in dl.methods():
        out = dl.d_check(dl.Vbf.random_quadratic(5, 6, 7), method=method)
        assert out["method"] == method

    rep = dl.reproduce("n2-negative", threads=1)
    assert rep["passed"], rep

    try:
        dl.Vbf(2, 1, [0, 1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("bad table accepted")
    print("smoke ok:", len(dl.EXPERIMENTS), "experiments available")


if __name__ == "__main__":
    main()
