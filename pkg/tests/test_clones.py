import itertools

import pytest

from thrclone.boolfn import AND2, MAJ3, NOT, OR2, XOR2, BoolFn, all_functions, compose, constant, projection
from thrclone.clones import (
    INF,
    CloneId,
    anf_coefficients,
    as_clone,
    catalogue,
    characterizing_constraints,
    is_linear,
    is_member,
    is_separating,
    membership_crosscheck,
    separation_defect,
)
from thrclone.constraints import LEQ, Relation, RelationalConstraint
from thrclone.exceptions import ConsistencyError, DomainError, ParseError
from thrclone.threshold import is_threshold

from conftest import functions_upto


def separating_oracle(f, a, rank):
    """Every subset of f^{-1}(a) of size <= rank shares a coordinate equal to a."""
    pts = [p for p in itertools.product((0, 1), repeat=f.arity) if f(p) == a]
    sizes = range(1, (len(pts) if rank == INF else min(rank, len(pts))) + 1)
    for size in sizes:
        for subset in itertools.combinations(pts, size):
            if not any(all(p[i] == a for p in subset) for i in range(f.arity)):
                return False
    return True


class TestCloneId:
    @pytest.mark.parametrize("text", ["Omega", "T0", "Mc", "SM", "U2", "Uinf", "McUinf", "McWinf", "Lam", "V", "Omega1", "Istar", "Ic", "TcW3"])
    def test_round_trip(self, text):
        assert str(CloneId.parse(text)) == text

    @pytest.mark.parametrize("text", ["U1", "Foo", "Uabc", "Lam2"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            CloneId.parse(text)

    def test_rank_required(self):
        with pytest.raises(DomainError):
            CloneId("U")
        with pytest.raises(DomainError):
            CloneId("M", 2)

    def test_display(self):
        assert CloneId("McU", INF).display == "McU∞"
        assert CloneId("Lam").display == "Λ"

    def test_catalogue_size(self):
        assert len(catalogue((2, 3, INF))) == 30 + 8 * 3


class TestDirect:
    def test_examples(self, f3):
        assert is_member(XOR2, "L")
        assert is_member(AND2, "Uinf")
        assert is_member(f3, "M")

    def test_anf(self):
        # x xor y has monomials x and y
        assert list(anf_coefficients(XOR2)) == [0, 1, 1, 0]
        assert not is_linear(AND2)

    def test_linear_against_oracle(self):
        affine = set()
        for n in (1, 2, 3):
            for coeffs in itertools.product((0, 1), repeat=n + 1):
                affine.add(BoolFn(n, [(coeffs[0] + sum(c * x for c, x in zip(coeffs[1:], a))) % 2
                                      for a in itertools.product((0, 1), repeat=n)]))
        for f in functions_upto(3):
            assert is_linear(f) == (f in affine)

    def test_conjunctions(self):
        assert is_member(AND2, "Lam") and is_member(constant(2, 1), "Lam")
        assert not is_member(OR2, "Lam")
        assert is_member(OR2, "V") and not is_member(MAJ3, "V")

    @pytest.mark.parametrize("rank", [2, 3, INF])
    def test_separation_against_oracle(self, rank):
        for f in functions_upto(3):
            for a in (0, 1):
                assert is_separating(f, a, rank) == separating_oracle(f, a, rank), (str(f), a, rank)

    def test_defect(self):
        # the true points of OR2 other than (1,1) share no coordinate
        assert separation_defect(OR2, 1) == 2
        assert separation_defect(AND2, 1) is None

    def test_containments(self):
        for f in functions_upto(3):
            if is_member(f, "SM"):
                assert is_member(f, "S") and is_member(f, "M")
            if is_member(f, "Mc"):
                assert is_member(f, "M") and is_member(f, "Tc")
            if is_member(f, "McUinf"):
                assert is_member(f, "Mc") and is_member(f, "Uinf")

    def test_lam_v_inside_thr(self):
        for f in functions_upto(3):
            if is_member(f, "Lam") or is_member(f, "V"):
                assert is_threshold(f) is not None

    def test_linear_threshold_is_essentially_unary(self):
        for f in functions_upto(3):
            if is_member(f, "L"):
                assert (is_threshold(f) is not None) == is_member(f, "Omega1")


class TestCharacterization:
    def test_examples(self):
        assert characterizing_constraints("M").constraints == (LEQ,)
        assert set(characterizing_constraints("Tc").constraints) == {
            RelationalConstraint.of_relation(Relation(1, (0,))),
            RelationalConstraint.of_relation(Relation(1, (1,))),
        }
        assert characterizing_constraints("Omega").constraints == ()

    def test_separation_relations(self):
        (u2,) = characterizing_constraints("U2").constraints
        assert (1, 1) not in u2.antecedent and len(u2.antecedent) == 3
        (w2,) = characterizing_constraints("W2").constraints
        assert (0, 0) not in w2.antecedent

    def test_truncation(self):
        char = characterizing_constraints("Uinf", rank_bound=3)
        assert char.truncated and len(char.constraints) == 2

    def test_all_constraints_are_diagonal(self):
        for c in catalogue((2, 3, INF)):
            for q in characterizing_constraints(c).constraints:
                assert q.antecedent == q.consequent

    def test_crosscheck_examples(self):
        assert membership_crosscheck(MAJ3, "SM")
        assert not membership_crosscheck(NOT, "M")
        assert membership_crosscheck(AND2, "Lam")

    def test_crosscheck_exhaustive(self):
        for c in catalogue((2, 3, 4, INF)):
            for f in functions_upto(3):
                membership_crosscheck(f, c, rank_bound=4)

    def test_crosscheck_needs_rank_bound(self):
        with pytest.raises(DomainError):
            membership_crosscheck(BoolFn.from_int(3, 1), "Uinf", rank_bound=2)

    def test_disagreement_raises(self, monkeypatch):
        import thrclone.clones as clones

        monkeypatch.setattr(clones, "is_member", lambda f, c: True)
        with pytest.raises(ConsistencyError):
            clones.membership_crosscheck(NOT, "M")


@pytest.mark.parametrize("c", catalogue((2, 3, INF)), ids=str)
def test_clone_axioms(c):
    members2 = [f for f in all_functions(2) if is_member(f, c)]
    assert projection(2, 1) in members2 and projection(2, 2) in members2
    assert all(is_member(projection(3, i), c) for i in (1, 2, 3))
    member_set = set(members2)
    for f in members2:
        for g1, g2 in itertools.product(members2, repeat=2):
            assert compose(f, [g1, g2]) in member_set
    members3 = [f for f in all_functions(3) if is_member(f, c)]
    for f in members3[::7]:
        for gs in itertools.islice(itertools.product(members3, repeat=3), 0, None, 997):
            assert is_member(compose(f, list(gs)), c)


def test_as_clone():
    assert as_clone("Mc") == CloneId("Mc")
