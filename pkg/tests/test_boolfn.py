import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thrclone.boolfn import (
    AND2,
    IDENTITY,
    MAJ3,
    NOT,
    OR2,
    XNOR2,
    XOR2,
    BoolFn,
    MinorMap,
    all_functions,
    canonical_form,
    compose,
    constant,
    decode_point,
    dual,
    encode_point,
    equivalent,
    essential_variables,
    identification_minor,
    is_minor_of,
    is_monotone,
    is_self_dual,
    minor,
    negate,
    parse_fn,
    projection,
    shift,
)
from thrclone.exceptions import DimensionError, DomainError, ParseError, ResourceError

from conftest import brute_eval


@st.composite
def functions(draw, max_arity=4):
    n = draw(st.integers(1, max_arity))
    return BoolFn.from_int(n, draw(st.integers(0, (1 << (1 << n)) - 1)))


@st.composite
def minor_maps(draw, source, max_target=4):
    m = draw(st.integers(1, max_target))
    return MinorMap.of(draw(st.lists(st.integers(1, m), min_size=source, max_size=source)), m)


class TestFormat:
    def test_named_tables(self):
        assert str(AND2) == "2:8"
        assert str(OR2) == "2:E"
        assert str(XOR2) == "2:6"
        assert str(MAJ3) == "3:E8"
        assert str(NOT) == "1:1"
        assert str(IDENTITY) == "1:2"

    def test_majority_from_definition(self):
        assert parse_fn("3:E8") == brute_eval(lambda a, b, c: a + b + c >= 2, 3)

    def test_padding(self):
        assert str(constant(3, 0)) == "3:00"
        assert str(BoolFn.from_int(4, 1)) == "4:0001"

    def test_lowercase_accepted(self):
        assert parse_fn("3:e8") == MAJ3

    @pytest.mark.parametrize(
        "text, position",
        [("2:G1", 2), ("x:1", 0), ("2:", 2), ("2:1F", 3), ("0:1", 0), ("nocolon", 0)],
    )
    def test_parse_errors(self, text, position):
        with pytest.raises(ParseError) as info:
            parse_fn(text)
        assert info.value.position == position

    def test_value_too_large(self):
        with pytest.raises(ParseError):
            parse_fn("1:4")

    @given(functions(max_arity=6))
    def test_round_trip(self, f):
        assert parse_fn(str(f)) == f

    def test_point_round_trip(self):
        for n in range(1, 9):
            for idx in range(1 << n):
                assert encode_point(decode_point(idx, n)) == idx

    def test_first_coordinate_most_significant(self):
        assert encode_point((1, 0, 0)) == 4
        assert decode_point(1, 3) == (0, 0, 1)


class TestEvaluate:
    def test_examples(self):
        assert AND2(1, 1) == 1
        assert XOR2((1, 0)) == 1
        assert AND2(0, 1) == 0

    def test_wrong_length(self):
        with pytest.raises(DimensionError):
            AND2(1, 0, 1)

    def test_table_is_read_only(self):
        with pytest.raises(ValueError):
            AND2.table[0] = 1


class TestMinors:
    def test_examples(self):
        assert minor(AND2, MinorMap.of((1, 1), 1)) == IDENTITY
        assert minor(XOR2, MinorMap.of((1, 1), 1)) == constant(1, 0)
        assert minor(projection(2, 1), MinorMap.of((2, 1), 2)) == projection(2, 2)

    def test_identification(self):
        assert identification_minor(XOR2, {1, 2}) == constant(1, 0)
        assert identification_minor(AND2, {1, 2}) == IDENTITY
        # maj3(x, x, y) = x
        expected = brute_eval(lambda x, y: MAJ3(x, x, y), 2)
        assert identification_minor(MAJ3, {1, 2}) == expected == projection(2, 1)

    def test_identification_domain(self):
        with pytest.raises(DomainError):
            identification_minor(AND2, {1, 3})
        with pytest.raises(DomainError):
            identification_minor(IDENTITY, {1, 2})

    def test_is_minor_of(self):
        assert is_minor_of(IDENTITY, AND2)
        assert is_minor_of(XOR2, XOR2)
        assert not is_minor_of(NOT, AND2)

    def test_budget(self):
        with pytest.raises(ResourceError):
            is_minor_of(BoolFn.from_int(4, 3), BoolFn.from_int(4, 5), budget=10)

    @given(st.data())
    def test_minor_matches_direct_evaluation(self, data):
        g = data.draw(functions())
        sigma = data.draw(minor_maps(g.arity))
        f = minor(g, sigma)
        for a in itertools.product((0, 1), repeat=sigma.target_arity):
            assert f(a) == g(tuple(a[sigma(i) - 1] for i in range(1, g.arity + 1)))

    @given(st.data())
    def test_composition(self, data):
        g = data.draw(functions())
        sigma = data.draw(minor_maps(g.arity))
        tau = data.draw(minor_maps(sigma.target_arity))
        assert minor(minor(g, sigma), tau) == minor(g, sigma.then(tau))

    @given(st.data())
    def test_essential_bounded_by_image(self, data):
        g = data.draw(functions())
        sigma = data.draw(minor_maps(g.arity))
        assert len(essential_variables(minor(g, sigma))) <= len(set(sigma.mapping))

    @given(functions(3), functions(3), functions(3))
    def test_minor_order_reflexive_transitive(self, f, g, h):
        assert is_minor_of(f, f)
        if is_minor_of(f, g) and is_minor_of(g, h):
            assert is_minor_of(f, h)


class TestTransforms:
    def test_examples(self):
        assert dual(AND2) == OR2
        assert negate(negate(MAJ3)) == MAJ3
        assert shift(XOR2, (1, 0)) == XNOR2

    def test_involutions_exhaustive(self):
        for n in (1, 2, 3):
            for f in all_functions(n):
                assert dual(dual(f)) == f
                assert negate(negate(f)) == f
                for u in itertools.product((0, 1), repeat=n):
                    assert shift(shift(f, u), u) == f

    def test_dual_definition(self):
        for f in all_functions(2):
            expected = brute_eval(lambda a, b: 1 - f(1 - a, 1 - b), 2)
            assert dual(f) == expected

    def test_self_dual(self):
        assert is_self_dual(MAJ3)
        assert not is_self_dual(AND2)

    def test_compose(self):
        # AND(x, OR(x, y)) = x
        assert compose(AND2, [projection(2, 1), OR2]) == projection(2, 1)


class TestEssential:
    def test_examples(self):
        assert essential_variables(AND2) == {1, 2}
        assert essential_variables(constant(3, 0)) == frozenset()
        assert essential_variables(MAJ3) == {1, 2, 3}

    @given(functions())
    def test_against_flip_oracle(self, f):
        n = f.arity
        expected = {
            i
            for i in range(1, n + 1)
            for a in itertools.product((0, 1), repeat=n)
            if f(a) != f(a[: i - 1] + (1 - a[i - 1],) + a[i:])
        }
        assert essential_variables(f) == expected


class TestEquivalence:
    def test_padding_and_permutation(self):
        padded = minor(AND2, MinorMap.of((3, 1), 3))
        assert equivalent(padded, AND2)
        assert canonical_form(padded) == canonical_form(AND2)

    def test_constants(self):
        assert canonical_form(constant(3, 1)) == constant(1, 1)
        assert not equivalent(constant(2, 0), constant(2, 1))

    @given(functions(4), st.permutations([1, 2, 3, 4]))
    def test_permutation_invariant(self, f, perm):
        sigma = MinorMap.of(perm[: f.arity], 4)
        assert canonical_form(minor(f, sigma)) == canonical_form(f)


def test_monotone_against_pairwise_oracle():
    pts = list(itertools.product((0, 1), repeat=3))
    for f in all_functions(3):
        expected = all(
            f(a) <= f(b) for a in pts for b in pts if all(x <= y for x, y in zip(a, b))
        )
        assert is_monotone(f) == expected


def test_all_functions_count():
    assert sum(1 for _ in all_functions(2)) == 16
    assert len({f for f in all_functions(3)}) == 256
    assert np.array_equal(next(iter(all_functions(1))).table, [0, 0])
