"""Smoke test for the Python extension module.

Build and install first, for example:
    maturin develop -m crates/py/Cargo.toml
"""
from fractions import Fraction
from itertools import product

import quasibetti as qb


def brute_phi(degrees, mu, t):
    return sum(
        1
        for x in product(range(t + 1), repeat=len(degrees))
        if sum(x) == t and sum(d * k for d, k in zip(degrees, x)) == mu
    )


def main():
    h, u, pivots = qb.hnf([[3, 5, 8, 9], [1, 1, 1, 1]])
    assert h[0][:2] == [1, 0] and h[1][:2] == [0, 1], h

    assert qb.count_fiber([[3, 5, 8, 9], [1, 1, 1, 1]], [30, 5]) == 2

    w = qb.WeightSystem([1, 2, 3])
    for t in range(6):
        for mu in range(3 * t + 1):
            assert w(mu, t) == brute_phi([1, 2, 3], mu, t)

    chambers = w.chambers()
    assert len(chambers) == 2
    qp = w.fit(chambers[0])
    mu, t = 50, 40
    assert chambers[0].contains(mu, t)
    assert qp(mu, t) == Fraction(w(mu, t))

    i = qb.MonomialIdeal(2, [[2, 0], [0, 3]])
    assert (i ** 2).generators == qb.MonomialIdeal(2, [[4, 0], [2, 3], [0, 6]]).generators
    m2 = qb.MonomialIdeal(2, [[2, 0], [1, 1], [0, 2]])
    assert qb.MonomialIdeal(2, [[2, 0], [0, 2]]).integral_closure() == m2
    table = m2.betti_table()
    assert table[0, 2] == 3 and table[1, 3] == 2

    f = qb.Filtration("powers", i, 10)
    good, n0 = f.good_check(i)
    assert good and n0 == 0
    regions = f.regions(0, (3, 7), (8, 10))
    tables = dict(f.betti_tables())
    assert all(regions.predict(mu, 10) == tables[10][0, mu] for mu in range(40))

    try:
        qb.WeightSystem([0, 1])
    except qb.QuasibettiError as e:
        assert e.args[0] == "invalid_input"
    else:
        raise AssertionError("expected QuasibettiError")

    assert qb.brion_check([[0, 0], [2, 0], [0, 2]], -2, 4)
    assert qb.pick_count([(0, 0), (2, 0), (0, 2)]) == 6
    assert qb.certify_ci([2, 3], 5)
    print("python smoke test passed")


if __name__ == "__main__":
    main()
