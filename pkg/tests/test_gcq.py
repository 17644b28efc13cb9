import pytest

from conftest import model_battery, random_term, relation_oracle
from cqgraph.errors import ParseError, SignatureError, SortError
from cqgraph.gcq import (
    Copy,
    Discard,
    Gen,
    Id0,
    Id1,
    Merge,
    Seq,
    Spawn,
    Swap,
    Tensor,
    eval_gcq,
    infer_sort,
    n_copy,
    n_discard,
    n_merge,
    n_spawn,
    n_swap,
    parse_gcq,
    print_gcq,
)
from cqgraph.sigmodel import RelModel, Signature, Sort, relation_compose, relation_tensor

SIG = Signature({"R": (2, 0), "S": (1, 1)})


def test_sorts_of_constants():
    assert Copy().sort == Sort(1, 2)
    assert Discard().sort == Sort(1, 0)
    assert Merge().sort == Sort(2, 1)
    assert Spawn().sort == Sort(0, 1)
    assert Id0().sort == Sort(0, 0)
    assert Id1().sort == Sort(1, 1)
    assert Swap().sort == Sort(2, 2)


def test_example_term_sort():
    # ((id (+) copy) (+) id0) ; (R (+) S) with R: (2,0), S: (1,1)
    t = Seq(Tensor(Tensor(Id1(), Copy()), Id0()),
            Tensor(Gen("R", 2, 0), Gen("S", 1, 1)))
    assert t.sort == Sort(2, 1)
    assert infer_sort(t, SIG) is t


def test_ill_sorted_composition():
    with pytest.raises(SortError):
        Seq(Copy(), Copy())


def test_infer_sort_rejects_wrong_box():
    with pytest.raises(SortError):
        infer_sort(Gen("R", 1, 1), SIG)
    with pytest.raises(SignatureError):
        infer_sort(Gen("Q", 1, 1), SIG)


def test_eval_bone():
    bone = Seq(Spawn(), Discard())
    empty = RelModel(SIG, [])
    two = RelModel(SIG, ["a", "b"])
    assert eval_gcq(bone, empty).pairs == frozenset()
    assert eval_gcq(bone, two).pairs == frozenset({((), ())})
    # id0 denotes the unit relation on every model, including the empty one
    assert eval_gcq(Id0(), empty).pairs == frozenset({((), ())})


def test_eval_identity():
    two = RelModel(SIG, ["a", "b"])
    assert eval_gcq(Id1(), two).pairs == frozenset({((0,), (0,)), ((1,), (1,))})


def test_eval_box_is_interpretation():
    model = RelModel(SIG, ["a", "b"], {"S": [((0,), (1,))]})
    assert eval_gcq(Gen("S", 1, 1), model) == model.relation("S")


def test_eval_unknown_symbol():
    model = RelModel(Signature({}), ["a"])
    with pytest.raises(SignatureError):
        eval_gcq(Gen("S", 1, 1), model)


def test_sugar_base_cases():
    assert n_copy(0) == Id0()
    assert n_discard(1) == Discard()
    assert n_spawn(1) == Spawn()
    assert n_swap(1, 1) == Swap()
    assert n_swap(0, 3).sort == Sort(3, 3)


def test_sugar_sorts():
    for n in range(6):
        assert n_copy(n).sort == Sort(n, 2 * n)
        assert n_discard(n).sort == Sort(n, 0)
        assert n_merge(n).sort == Sort(2 * n, n)
        assert n_spawn(n).sort == Sort(0, n)
        for m in range(6):
            assert n_swap(n, m).sort == Sort(n + m, m + n)


def test_n_copy_duplicates_the_bundle(rng):
    model = RelModel(SIG, ["a", "b", "c"])
    rel = eval_gcq(n_copy(2), model)
    expected = frozenset(((x, y), (x, y, x, y))
                         for x in range(3) for y in range(3))
    assert rel.pairs == expected


def test_n_merge_n_discard_semantics():
    model = RelModel(SIG, ["a", "b"])
    assert eval_gcq(n_merge(2), model).pairs == frozenset(
        ((x, y, x, y), (x, y)) for x in range(2) for y in range(2))
    assert eval_gcq(n_discard(2), model).pairs == frozenset(
        ((x, y), ()) for x in range(2) for y in range(2))


def test_n_swap_blocks():
    model = RelModel(SIG, ["a", "b", "c"])
    rel = eval_gcq(n_swap(2, 1), model)
    assert rel.pairs == frozenset(((a, b, c), (c, a, b))
                                  for a in range(3) for b in range(3) for c in range(3))


def test_parse_basic():
    t = parse_gcq("copy ; (S (+) id)", SIG)
    assert t == Seq(Copy(), Tensor(Gen("S", 1, 1), Id1()))


def test_parse_sort_error():
    with pytest.raises(SortError):
        parse_gcq("merge ; merge", SIG)


def test_parse_syntax_error():
    with pytest.raises(ParseError):
        parse_gcq("copy ;", SIG)
    with pytest.raises(ParseError):
        parse_gcq("copy extra", SIG)


def test_parse_precedence():
    # tensor binds tighter than composition, both associate left
    t = parse_gcq("copy ; S (+) S ; merge", SIG)
    assert t == Seq(Seq(Copy(), Tensor(Gen("S", 1, 1), Gen("S", 1, 1))), Merge())


def test_print_parse_round_trip(rng):
    example = Seq(Tensor(Tensor(Id1(), Copy()), Id0()),
                  Tensor(Gen("R", 2, 0), Gen("S", 1, 1)))
    assert parse_gcq(print_gcq(example), SIG) == example
    for _ in range(60):
        t = random_term(rng, SIG, max_nodes=9)
        assert parse_gcq(print_gcq(t), SIG) == t


def test_eval_is_compositional(rng):
    for _ in range(25):
        t = random_term(rng, SIG, max_nodes=7, width_cap=4)
        for model in model_battery(SIG, rng, sizes=(1, 2, 2)):
            assert eval_gcq(t, model).pairs == relation_oracle(t, model)


def test_seq_tensor_agree_with_relation_algebra(rng):
    for _ in range(25):
        a = random_term(rng, SIG, max_nodes=4, width_cap=3)
        b = random_term(rng, SIG, max_nodes=4, width_cap=3)
        model = model_battery(SIG, rng, sizes=(2,))[1]
        assert eval_gcq(Tensor(a, b), model) == \
            relation_tensor(eval_gcq(a, model), eval_gcq(b, model))
        if a.sort.m == b.sort.n:
            assert eval_gcq(Seq(a, b), model) == \
                relation_compose(eval_gcq(a, model), eval_gcq(b, model))


def test_precongruence_on_models(rng):
    # pointwise inclusion of parts gives inclusion of composites
    bone = Seq(Spawn(), Discard())
    pairs = [(bone, Id0()), (Seq(Merge(), Copy()), Tensor(Id1(), Id1()))]
    for (c, c2), (d, d2) in [(pairs[0], pairs[0]), (pairs[1], pairs[1]),
                             (pairs[0], pairs[1])]:
        for model in model_battery(SIG, rng, sizes=(1, 2, 3)):
            assert eval_gcq(c, model).pairs <= eval_gcq(c2, model).pairs
            assert eval_gcq(d, model).pairs <= eval_gcq(d2, model).pairs
            assert eval_gcq(Tensor(c, d), model).pairs <= \
                eval_gcq(Tensor(c2, d2), model).pairs
            if c.sort.m == d.sort.n:
                assert eval_gcq(Seq(c, d), model).pairs <= \
                    eval_gcq(Seq(c2, d2), model).pairs
