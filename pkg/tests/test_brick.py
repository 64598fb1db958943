import pytest

from heisenbrick.brick import Brick, FiberedProductSet, fiber_at, product_fibered, square_fibered
from heisenbrick.errors import InputError, ResourceError
from heisenbrick.fp import ResidueSet, prime_field, sumset
from heisenbrick.heisenberg import HeisElement, brute_product_set
from heisenbrick.sampling import edge_bricks, random_bricks
from heisenbrick.structure import prop2_construct


def S(p, *vals):
    return ResidueSet.from_iterable(prime_field(p), vals)


def brick(p, xs, ys, z, **kw):
    return Brick([S(p, *x) for x in xs], [S(p, *y) for y in ys], S(p, *z), **kw)


def test_cardinality_and_contains():
    b = brick(13, [[1, 2]], [[1, 2]], [0, 1, 2])
    assert b.cardinality() == 12
    assert not b.contains(HeisElement.identity(13, 1))
    assert b.contains(HeisElement.make([2], [1], 2, 13))
    assert not b.contains(HeisElement.make([3], [1], 2, 13))


def test_no_coset_brick_size():
    assert prop2_construct(13, 1).cardinality() == 3 * 3 * 4


def test_brick_invariants():
    with pytest.raises(InputError):
        brick(5, [[0, 1]], [[1]], [0])
    with pytest.raises(InputError):
        brick(5, [[]], [[1]], [0])
    with pytest.raises(InputError):
        brick(5, [[1]], [[1]], [])
    with pytest.raises(InputError):
        Brick([S(5, 1)], [S(7, 1)], S(5, 0))
    assert brick(5, [[0, 1]], [[1]], [0], allow_zero=True).cardinality() == 2


def test_fiber_hand_example():
    b = brick(5, [[1, 2]], [[1]], [0])
    pset = square_fibered(b)
    # products: [1,1,0][2,1,0] -> [3,2,1] and [2,1,0][1,1,0] -> [3,2,2]
    assert pset.fiber((3,), (2,)) == S(5, 1, 2)
    assert pset.cardinality() == 4


def test_singleton_brick():
    pset = square_fibered(brick(5, [[1]], [[1]], [0]))
    assert pset.support == [((2,), (2,))]
    assert pset.fiber((2,), (2,)) == S(5, 1)


def test_big_z_gives_full_fibers():
    p = 7
    b = brick(p, [[1, 3]], [[2, 5, 6]], [0, 1, 2, 4])
    pset = square_fibered(b)
    assert all(f.is_full() for f in pset.fibers.values())
    _, _, w = pset.projections()
    assert w.is_full()


def test_projections_are_two_fold_sums():
    for b in random_bricks(7, 2, 10, seed=9):
        us, vs, _ = square_fibered(b).projections()
        for i in range(b.n):
            assert us[i] == sumset(b.xs[i], b.xs[i])
            assert vs[i] == sumset(b.ys[i], b.ys[i])


def test_no_coset_brick_w_not_field():
    _, _, w = square_fibered(prop2_construct(13, 1)).projections()
    assert w.to_list() == list(range(11))


def test_fiber_cap():
    b = brick(13, [list(range(1, 13))], [list(range(1, 13))], [0])
    with pytest.raises(ResourceError):
        square_fibered(b, fiber_cap=100)


@pytest.mark.parametrize("p,n", [(5, 1), (7, 1), (3, 2)])
def test_oracle_equivalence(p, n):
    for b in random_bricks(p, n, 15, seed=p * 10 + n) + edge_bricks(p, n):
        pset = square_fibered(b)
        brute = brute_product_set(b.to_element_set(), b.to_element_set())
        assert pset.to_element_set() == brute
        assert pset.cardinality() == len(brute)


def test_general_product_of_two_bricks():
    p = 7
    for a, b in zip(random_bricks(p, 1, 10, seed=1), random_bricks(p, 1, 10, seed=2)):
        pset = product_fibered(a, b)
        assert pset.to_element_set() == brute_product_set(a.to_element_set(), b.to_element_set())
        for (u, v), f in pset.fibers.items():
            assert fiber_at(a, b, u, v) == f


def test_relaxed_brick_product_matches_brute():
    b = prop2_construct(13, 1)
    assert square_fibered(b).to_element_set() == brute_product_set(b.to_element_set(), b.to_element_set())


def test_roundtrip_through_element_set():
    for b in random_bricks(5, 1, 5, seed=4):
        pset = square_fibered(b)
        assert FiberedProductSet.from_element_set(pset.to_element_set()) == pset


def test_right_translate_matches_brute():
    b = random_bricks(5, 1, 1, seed=8)[0]
    pset = square_fibered(b)
    g = HeisElement.make([2], [3], 1, 5)
    moved = pset.right_translate(g).to_element_set()
    assert set(moved) == {h * g for h in pset.to_element_set()}


def test_report_dump():
    rep = square_fibered(brick(5, [[1]], [[1]], [0])).report(dump_fibers=True)
    assert rep["cardinality"] == 1
    assert rep["fibers"] == [{"u": [2], "v": [2], "w": [1]}]
