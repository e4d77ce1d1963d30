"""Smoke test for the covsys extension module."""

from fractions import Fraction

import covsys


def main():
    a = covsys.Ecs.irreducible_example()
    assert len(a) == 13 and a.lcm == 30
    assert a.density() == Fraction(1)
    assert covsys.verify_scan(a) and covsys.verify_crt(a) and covsys.verify_genfun(a)
    assert a.greatest_modulus_count() == 6
    assert covsys.is_irreducible(a)
    assert covsys.is_natural(a) is None
    try:
        covsys.reduce_step(a)
    except covsys.CovsysError as e:
        assert "three or more" in str(e)
    else:
        raise AssertionError("reduce_step should refuse the example")

    v = [0] * 30
    for e in (5, 6, 12, 18, 24, 25):
        v[e] += 1
    assert covsys.vanishes(30, v)
    assert covsys.cyclotomic_polynomial(12) == [1, 0, -1, 0, 1]

    b, trace = covsys.generate_natural(7, 6, [2, 3], max_lcm=10_000)
    assert covsys.verify_crt(b)
    assert covsys.reduce_to_trivial(b) is not None
    assert covsys.replay(covsys.reduce_to_trivial(b)) == b
    assert covsys.replay(trace) == b
    c, step = covsys.reduce_step(b)
    assert covsys.is_prime_split(b, c)
    assert covsys.split(c, step[0], step[1], step[2]) == b

    assert [len(covsys.enumerate_ecs(n)) for n in (1, 2, 4, 12)] == [1, 2, 5, 206]
    assert covsys.Ecs([(0, 2), (-1, 2)]) == covsys.Ecs.basic(2)
    assert covsys.Ecs.parse(covsys.Ecs.basic(3).to_json()) == covsys.Ecs.basic(3)
    assert covsys.lemma1_quotient(12, 6, 6) == 2
    assert covsys.factorize(360) == [(2, 3), (3, 2), (5, 1)]
    print("smoke test ok")


if __name__ == "__main__":
    main()
