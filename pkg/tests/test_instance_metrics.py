import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcseval import (
    EvalStream,
    InstanceMetricSpec,
    LengthMismatch,
    NoPositives,
    OneClassOnly,
    PredictionRecord,
    auroc,
    average_precision,
    hamming_disagreement,
    instance_metric,
)

from . import oracles


def stream_from(ys, ps, ts=None):
    ts = ts or list(range(len(ys)))
    return EvalStream(
        [PredictionRecord(float(ts[i]), ys[i], ps[i], str(i)) for i in range(len(ys))]
    )


class TestHamming:
    def test_identity(self):
        assert hamming_disagreement([1, 0, 1], [1, 0, 1]) == 0

    def test_complement(self):
        y = [0, 1, 0, 1, 1]
        assert hamming_disagreement(y, [1 - v for v in y]) == 5

    def test_hand_count(self):
        assert hamming_disagreement([1, 0, 1, 1], [1, 1, 1, 0]) == 2

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            hamming_disagreement([1, 0], [1])

    def test_label_validation(self):
        with pytest.raises(ValueError):
            hamming_disagreement([1, 2], [0, 1])


class TestInstanceMetric:
    def test_sum_equals_c_times_h(self):
        spec = InstanceMetricSpec(1.0, "sum")
        assert instance_metric(spec, [1, 0, 1, 1], [1, 1, 1, 0]) == 2.0

    def test_one_minus_mean_is_accuracy(self):
        spec = InstanceMetricSpec(1.0, "one_minus_mean")
        assert instance_metric(spec, [1, 0, 1], [1, 0, 1]) == 1.0

    def test_weighted_mean(self):
        spec = InstanceMetricSpec(3.0, "mean")
        assert instance_metric(spec, [1, 0, 1, 1], [1, 1, 1, 0]) == 1.5

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            InstanceMetricSpec(-1.0, "sum")
        with pytest.raises(ValueError):
            InstanceMetricSpec(1.0, "median")

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 64), st.integers(0, 10**6), st.floats(0.01, 100.0))
    def test_counting_collapse(self, m, seed, c):
        rng = np.random.default_rng(seed)
        y = rng.integers(0, 2, m)
        h = int(rng.integers(0, m + 1))
        y_hat1, y_hat2 = y.copy(), y.copy()
        flip1 = rng.choice(m, size=h, replace=False)
        flip2 = rng.choice(m, size=h, replace=False)
        y_hat1[flip1] = 1 - y_hat1[flip1]
        y_hat2[flip2] = 1 - y_hat2[flip2]
        assert hamming_disagreement(y, y_hat1) == hamming_disagreement(y, y_hat2) == h
        for agg in ("sum", "mean", "one_minus_mean"):
            spec = InstanceMetricSpec(c, agg)
            a = instance_metric(spec, y, y_hat1)
            b = instance_metric(spec, y, y_hat2)
            assert a == b  # bit-identical, not merely close


class TestAveragePrecision:
    def test_perfect_ranking(self):
        assert average_precision(stream_from([1, 1, 0, 0], [0.9, 0.8, 0.2, 0.1])) == 1.0

    def test_all_positive(self):
        assert average_precision(stream_from([1, 1, 1], [0.2, 0.9, 0.5])) == 1.0

    def test_hand_example(self):
        ap = average_precision(stream_from([1, 0, 1], [0.9, 0.8, 0.7]))
        assert ap == pytest.approx((1.0 + 2.0 / 3.0) / 2.0, abs=1e-12)

    def test_no_positives(self):
        with pytest.raises(NoPositives):
            average_precision(stream_from([0, 0], [0.1, 0.2]))

    def test_ties_keep_input_order(self):
        # identical scores: ranking is input order, so AP is order-dependent
        first = average_precision(stream_from([1, 0], [0.5, 0.5]))
        second = average_precision(stream_from([0, 1], [0.5, 0.5]))
        assert first == 1.0 and second == 0.5

    def test_against_direct_enumeration(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            n = int(rng.integers(2, 30))
            y = rng.integers(0, 2, n)
            if y.sum() == 0:
                y[0] = 1
            p = np.round(rng.random(n), 2)  # rounding forces score ties
            got = average_precision(stream_from(list(y), list(p)))
            want = oracles.average_precision_direct(list(y), list(p))
            assert got == pytest.approx(want, abs=1e-12)


class TestAuroc:
    def test_perfect(self):
        assert auroc(stream_from([1, 1, 0], [0.9, 0.8, 0.1])) == 1.0

    def test_all_tied_scores(self):
        assert auroc(stream_from([1, 0, 1, 0], [0.5, 0.5, 0.5, 0.5])) == 0.5

    def test_hand_example(self):
        assert auroc(stream_from([1, 0, 1], [0.9, 0.8, 0.7])) == 0.5

    def test_one_class_only(self):
        with pytest.raises(OneClassOnly):
            auroc(stream_from([1, 1], [0.2, 0.4]))

    def test_against_pairwise_enumeration(self):
        rng = np.random.default_rng(13)
        for _ in range(40):
            n = int(rng.integers(2, 30))
            y = rng.integers(0, 2, n)
            y[0], y[1] = 0, 1
            p = np.round(rng.random(n), 2)
            got = auroc(stream_from(list(y), list(p)))
            want = oracles.auroc_direct(list(y), list(p))
            assert got == pytest.approx(want, abs=1e-12)

    def test_invariant_under_monotone_transform(self):
        rng = np.random.default_rng(17)
        y = list(rng.integers(0, 2, 40))
        y[0], y[1] = 0, 1
        p = rng.random(40)
        base = auroc(stream_from(y, list(p)))
        squashed = auroc(stream_from(y, list(0.1 + 0.8 * p**3)))
        assert squashed == pytest.approx(base, abs=1e-12)


class TestTimeBlindness:
    def test_metrics_ignore_timestamps(self):
        y = [1, 0, 1, 0, 1]
        p = [0.9, 0.7, 0.6, 0.3, 0.2]
        a = stream_from(y, p, ts=[0, 1, 2, 3, 4])
        b = stream_from(y, p, ts=[0, 100, 5000, 5001, 9999])
        assert average_precision(a) == average_precision(b)
        assert auroc(a) == auroc(b)
