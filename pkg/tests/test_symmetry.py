import math

import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup as SympyGroup

from perfect_delaunay.core.budget import Budget
from perfect_delaunay.core.exactmath import mat_mul
from perfect_delaunay.core.qlattice import QuadraticForm, eval_form
from perfect_delaunay.core.symmetry import (
    PermutationGroup,
    color_classes,
    compose,
    coordinate_symmetric_subgroup,
    distance_coloring,
    invert,
    lattice_automorphisms,
    polytope_automorphisms,
    preserves_form,
    quad_inv_dim,
    refine_partition,
)
from perfect_delaunay.exceptions import BudgetExceeded


def identity_form(n):
    return QuadraticForm.from_rows([[int(i == j) for j in range(n)] for i in range(n)])


def random_permutation(rng, degree):
    p = list(range(degree))
    rng.shuffle(p)
    return tuple(p)


def test_compose_and_invert():
    p = (1, 2, 0)
    q = (0, 2, 1)
    # p first: 0 -> 1, then q: 1 -> 2
    assert compose(p, q)[0] == 2
    assert compose(p, invert(p)) == (0, 1, 2)


def test_symmetric_group_order():
    for n in range(2, 7):
        cycle = tuple(list(range(1, n)) + [0])
        swap = (1, 0) + tuple(range(2, n))
        group = PermutationGroup(n, [cycle, swap])
        assert group.order == math.factorial(n)
        assert group.is_transitive()


def test_trivial_group():
    group = PermutationGroup(4, [(0, 1, 2, 3)])
    assert group.order == 1
    assert group.generators == ()
    assert group.orbits() == [(0,), (1,), (2,), (3,)]


def test_order_matches_sympy(rng):
    for _ in range(25):
        degree = rng.randint(3, 9)
        gens = [random_permutation(rng, degree) for _ in range(rng.randint(1, 3))]
        expected = SympyGroup([SympyPermutation(list(g)) for g in gens]).order()
        assert PermutationGroup(degree, gens).order == expected


def test_membership(rng):
    # A_5 from two 3-cycles
    group = PermutationGroup(5, [(1, 2, 0, 3, 4), (0, 1, 3, 4, 2)])
    assert group.order == 60
    for _ in range(20):
        assert group.contains(group.random_element(rng))
    assert not group.contains((1, 0, 2, 3, 4))


def test_base_is_respected():
    group = PermutationGroup(4, [(1, 2, 3, 0)], base=(2,))
    assert group.base[0] == 2
    assert group.orbit_sizes == (4,)


def test_refinement_splits_path_ends():
    # path 0 - 1 - 2: the ends are equivalent, the middle is not
    colors = [[0, 1, 2], [1, 0, 1], [2, 1, 0]]
    cells = refine_partition(colors)
    assert cells[0] == cells[2] != cells[1]


def test_color_classes_are_ordered_by_distance():
    form = identity_form(2)
    coloring = distance_coloring(form, [(0, 0), (1, 0), (1, 1)])
    assert coloring[0][2] == 2
    assert color_classes(coloring) == ((0, 1, 2), (1, 0, 1), (2, 1, 0))


def test_preserves_form():
    a2 = ((2, 1), (1, 2))
    assert preserves_form(((0, -1), (1, 1)), a2)
    assert not preserves_form(((0, 1), (1, 0)), ((1, 0), (0, 2)))


def test_segment_group():
    group = polytope_automorphisms(identity_form(1), [(0,), (1,)])
    assert group.order == 2
    assert group.generators[0].linear == ((-1,),)
    assert group.generators[0].translation == (1,)
    assert group.is_generating


def test_square_group_is_dihedral():
    group = polytope_automorphisms(identity_form(2), [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert group.order == 8
    assert group.group.order == 8
    for g in group.generators:
        assert sorted(g.apply(v) for v in [(0, 0), (1, 0), (0, 1), (1, 1)]) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_rhombus_group():
    # one diagonal has the edge norm, the other does not
    form = QuadraticForm.from_rows([[2, 1], [1, 2]])
    group = polytope_automorphisms(form, [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert group.order == 4
    assert group.group.order == 4
    for g in group.generators:
        assert preserves_form(g.linear, ((2, 1), (1, 2)))


def test_g6_group(polytope):
    record, vertices = polytope("G6")
    group = polytope_automorphisms(record.form(), vertices)
    assert group.order == 51840
    assert group.group.order == 51840
    assert group.group.is_transitive()
    assert not group.certification_failures
    assert quad_inv_dim(group.linear_parts()) == 1


@pytest.mark.slow
def test_g7_group(polytope):
    record, vertices = polytope("G7")
    group = polytope_automorphisms(record.form(), vertices)
    assert group.order == 2903040
    assert group.group.is_transitive()


@pytest.mark.slow
def test_d8_1_group(polytope):
    record, vertices = polytope("D8_1")
    group = polytope_automorphisms(record.form(), vertices)
    assert group.order == 10080
    assert quad_inv_dim(group.linear_parts() + [tuple(tuple(-int(i == j) for j in range(8)) for i in range(8))]) == 3


def test_budget_is_a_node_allowance():
    budget = Budget(0.01, "search for X", nodes_per_second=1000)
    assert budget.max_nodes == 10
    with pytest.raises(BudgetExceeded) as err:
        for _ in range(1000):
            budget.tick()
    assert err.value.what == "search for X"
    assert err.value.limit == "0.01s"
    assert budget.nodes == 11

    with pytest.raises(BudgetExceeded):
        Budget(-1).tick()

    unlimited = Budget.unlimited()
    for _ in range(1000):
        unlimited.tick()
    assert unlimited.nodes == 1000


def test_lattice_group_of_cubic_lattice():
    for n in range(1, 5):
        group = lattice_automorphisms(identity_form(n))
        assert group.order == 2 ** n * math.factorial(n)
        assert group.verify(identity_form(n))


def test_lattice_group_of_hexagonal_lattice():
    form = QuadraticForm.from_rows([[2, 1], [1, 2]])
    group = lattice_automorphisms(form)
    assert group.order == 12
    assert group.verify(form)


def test_lattice_group_candidate_limit():
    with pytest.raises(BudgetExceeded):
        lattice_automorphisms(identity_form(3), candidate_limit=4)


def test_lattice_group_needs_definite_form():
    with pytest.raises(ValueError):
        lattice_automorphisms(QuadraticForm.from_rows([[1, 2], [2, 1]]))


@pytest.mark.slow
def test_g6_lattice_group(polytope):
    record, _ = polytope("G6")
    assert lattice_automorphisms(record.form()).order == 103680


def test_coordinate_symmetric_subgroup(polytope):
    assert coordinate_symmetric_subgroup(polytope("G6")[0].form()).k == 5
    d8 = coordinate_symmetric_subgroup(polytope("D8_1")[0].form())
    assert d8.k == 7
    assert d8.witness == (0, 1, 2, 3, 4, 5, 6)
    diagonal = QuadraticForm.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert coordinate_symmetric_subgroup(diagonal).k == 1
    assert coordinate_symmetric_subgroup(identity_form(3)).k == 3


def test_quad_inv_dim():
    assert quad_inv_dim([], dimension=8) == 36
    minus = tuple(tuple(-int(i == j) for j in range(3)) for i in range(3))
    assert quad_inv_dim([minus]) == 6
    swap = ((0, 1), (1, 0))
    # invariant forms are a I + b J
    assert quad_inv_dim([swap]) == 2
    with pytest.raises(ValueError):
        quad_inv_dim([])


def test_quad_inv_dim_of_cubic_lattice_group():
    group = lattice_automorphisms(identity_form(3))
    assert quad_inv_dim(group.generators) == 1


def test_random_words_permute_the_vertices(polytope, rng):
    record, vertices = polytope("G6")
    group = polytope_automorphisms(record.form(), vertices)
    index = {v: i for i, v in enumerate(vertices)}
    for _ in range(100):
        images = list(vertices)
        for _ in range(rng.randint(1, 8)):
            g = rng.choice(group.generators)
            images = [g.apply(v) for v in images]
        perm = tuple(index[v] for v in images)
        assert sorted(perm) == list(range(len(vertices)))
        assert group.group.contains(perm)
        a, b = rng.sample(range(len(vertices)), 2)
        before = [x - y for x, y in zip(vertices[a], vertices[b])]
        after = [x - y for x, y in zip(images[a], images[b])]
        assert eval_form(record.form(), before) == eval_form(record.form(), after)


def test_quad_inv_dim_is_a_group_invariant():
    swap = ((0, 1, 0), (1, 0, 0), (0, 0, 1))
    minus = tuple(tuple(-int(i == j) for j in range(3)) for i in range(3))
    # S_00 = S_11, S_02 = S_12, S_01 and S_22 free
    assert quad_inv_dim([swap, minus]) == 4
    assert quad_inv_dim([swap, minus, mat_mul(swap, minus)]) == 4
    u = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    u_inv = ((1, -1, 0), (0, 1, 0), (0, 0, 1))
    conjugated = [mat_mul(mat_mul(u_inv, t), u) for t in (swap, minus)]
    assert quad_inv_dim(conjugated) == 4


def test_lattice_group_is_basis_independent():
    hexagonal = QuadraticForm.from_rows([[2, 3], [3, 6]])
    group = lattice_automorphisms(hexagonal)
    assert group.order == 12
    assert group.verify(hexagonal)


def test_lattice_group_of_d4():
    form = QuadraticForm.from_rows([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]])
    group = lattice_automorphisms(form)
    assert group.order == 1152
    assert group.verify(form)


@pytest.mark.slow
@pytest.mark.parametrize("record_id", ["D8_7", "D8_20", "tope35"])
def test_small_lattice_groups_of_the_catalog(polytope, record_id):
    record, _ = polytope(record_id)
    budget = Budget(600, f"lattice automorphisms of {record_id}")
    group = lattice_automorphisms(record.form(), budget=budget)
    assert group.order == record.expected.lattice_aut_order
    assert group.verify(record.form())
