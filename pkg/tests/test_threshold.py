import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from thrclone.asummability import is_k_asummable
from thrclone.boolfn import AND2, MAJ3, XOR2, BoolFn, MinorMap, all_functions, all_points, dual, minor
from thrclone.clones import INF, CloneId, catalogue, is_member
from thrclone.exceptions import DimensionError, DomainError, ResourceError
from thrclone.simplex import find_feasible
from thrclone.threshold import (
    CONTAINS_SM,
    FINITE,
    ThresholdCertificate,
    ThresholdClassifier,
    classify_intersection,
    intersection_membership,
    is_minimally_non_threshold,
    is_threshold,
    is_unate,
    verify_certificate,
    witness_clone,
)

from conftest import functions_upto


def integer_oracle(n, wmax=8, tmin=-24, tmax=25):
    pts = np.array(list(itertools.product((0, 1), repeat=n)))
    found = set()
    for w in itertools.product(range(-wmax, wmax + 1), repeat=n):
        dots = pts @ np.array(w)
        for t in range(tmin, tmax + 1):
            found.add(tuple((dots >= t).astype(int)))
    return found


@pytest.fixture(scope="module")
def arity4_verdicts():
    return {f: is_threshold(f) for f in all_functions(4)}


class TestSimplex:
    def test_feasible(self):
        x = find_feasible([[1, 1], [-1, 0]], [2, -1])
        assert x[0] + x[1] >= 2 and x[0] <= 1

    def test_infeasible(self):
        assert find_feasible([[1], [-1]], [1, 0]) is None

    def test_empty(self):
        assert find_feasible([], []) == []


class TestIsThreshold:
    def test_examples(self):
        cert = is_threshold(AND2)
        assert verify_certificate(AND2, cert)
        assert verify_certificate(AND2, ThresholdCertificate.of((1, 1), 2))
        assert is_threshold(XOR2) is None
        assert verify_certificate(MAJ3, ThresholdCertificate.of((1, 1, 1), 2))
        assert is_threshold(MAJ3) is not None

    def test_wrong_certificate(self):
        assert not verify_certificate(AND2, ThresholdCertificate.of((1, 1), 1))
        with pytest.raises(DimensionError):
            verify_certificate(AND2, ThresholdCertificate.of((1,), 1))

    def test_f3_has_no_certificate(self, f3):
        assert is_threshold(f3, prefilter=False) is None

    def test_counts(self, arity4_verdicts):
        counts = [sum(is_threshold(f) is not None for f in all_functions(n)) for n in (1, 2, 3)]
        assert counts == [4, 14, 104]
        assert sum(c is not None for c in arity4_verdicts.values()) == 1882

    def test_oracle_equivalence(self):
        for n in (1, 2, 3):
            oracle = integer_oracle(n)
            for f in all_functions(n):
                assert (is_threshold(f, prefilter=False) is not None) == (tuple(f.table) in oracle)

    def test_prefilter_is_sound(self):
        for f in functions_upto(3):
            assert (is_threshold(f) is None) == (is_threshold(f, prefilter=False) is None)
            if is_threshold(f, prefilter=False) is not None:
                assert is_unate(f)

    def test_round_trip(self, arity4_verdicts):
        for f, cert in arity4_verdicts.items():
            if cert is not None:
                assert verify_certificate(f, cert)

    def test_asummable(self, arity4_verdicts):
        for f, cert in arity4_verdicts.items():
            if cert is not None:
                assert is_k_asummable(f, 4)

    def test_dual_closure(self, arity4_verdicts):
        for f, cert in arity4_verdicts.items():
            assert (cert is None) == (arity4_verdicts[dual(f)] is None)

    @given(st.sampled_from(range(1 << 16)), st.lists(st.integers(1, 4), min_size=4, max_size=4))
    def test_minor_closure(self, value, images):
        f = BoolFn.from_int(4, value)
        if is_threshold(f) is not None:
            assert is_threshold(minor(f, MinorMap.of(images, 4))) is not None

    def test_budget(self):
        with pytest.raises(ResourceError):
            is_threshold(BoolFn.from_int(21, 0))

    def test_json(self):
        data = ThresholdCertificate.of((1, Fraction(1, 2)), 2).to_json()
        assert data == {"threshold": True, "weights": ["1/1", "1/2"], "t": "2/1"}


class TestMinimal:
    def test_examples(self, f3):
        assert is_minimally_non_threshold(f3)
        assert is_minimally_non_threshold(XOR2)
        assert not is_minimally_non_threshold(AND2)


class TestEstimator:
    def test_fit_predict(self):
        X = all_points(3)
        y = MAJ3.table
        est = ThresholdClassifier().fit(X, y)
        assert est.separable_
        assert np.array_equal(est.predict(X), y)
        assert est.score(X, y) == 1.0

    def test_params(self):
        est = ThresholdClassifier(max_rounds=7)
        assert est.get_params() == {"max_rounds": 7}
        assert clone(est).max_rounds == 7

    def test_exact_scores(self):
        est = ThresholdClassifier().fit(all_points(2), AND2.table)
        scores = est.decision_function(all_points(2))
        assert all(isinstance(s, Fraction) for s in scores)

    def test_not_separable(self):
        est = ThresholdClassifier().fit(all_points(2), XOR2.table)
        assert not est.separable_
        with pytest.raises(DomainError):
            est.predict(all_points(2))

    def test_unfitted(self):
        with pytest.raises(NotFittedError):
            ThresholdClassifier().predict([[0, 1]])

    def test_non_binary_input(self):
        with pytest.raises(ValueError):
            ThresholdClassifier().fit([[0, 2]], [1])

    def test_feature_count(self):
        est = ThresholdClassifier().fit(all_points(2), AND2.table)
        with pytest.raises(DimensionError):
            est.predict(all_points(3))

    def test_partial_data(self):
        est = ThresholdClassifier().fit([[0, 0, 0], [1, 1, 0], [1, 1, 1]], [0, 1, 1])
        assert list(est.predict([[1, 1, 0]])) == [1]


class TestClassification:
    def test_examples(self):
        assert classify_intersection("Lamc").finitely_characterizable
        v = classify_intersection("SM")
        assert not v.finitely_characterizable and v.reason == CONTAINS_SM
        assert not classify_intersection("Omega").finitely_characterizable

    def test_unknown(self):
        with pytest.raises(Exception):
            classify_intersection("Nope")

    def test_split(self):
        finite = {str(c) for c in catalogue((2, 3, INF)) if classify_intersection(c).finitely_characterizable}
        expected = {"L", "L0", "L1", "LS", "Lc", "Lam", "Lam0", "Lam1", "Lamc",
                    "V", "V0", "V1", "Vc", "Omega1", "Istar", "I", "I0", "I1", "Ic"}
        assert finite == expected

    def test_verdicts_against_members(self):
        for c in catalogue((2, 3, INF)):
            v = classify_intersection(c)
            assert v.finitely_characterizable == (v.reason == FINITE)
            if v.finitely_characterizable:
                for f in functions_upto(3):
                    if is_member(f, c):
                        assert any(is_member(f, u) for u in ("L", "V", "Lam"))
            else:
                e = witness_clone(v.reason)
                for f in functions_upto(3):
                    if is_member(f, e):
                        assert is_member(f, c)

    def test_intersection_membership(self, f3):
        assert intersection_membership(MAJ3, "SM")
        assert not intersection_membership(f3, "M")
        assert intersection_membership(AND2, CloneId("Lam"))
