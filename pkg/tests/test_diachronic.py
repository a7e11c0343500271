import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from src.config import ChangePointConfig
from src.data.records import Dataset, Interpretation, SupervisedExample, Utterance
from src.data.relations import RelationType
from src.diachronic import (
    ChangePoint,
    PosTimeSeries,
    detect_all,
    detect_change_point,
    frequency_filter,
    load_counts,
    normalize_zscore,
    noun_ratio,
    scan_change_point,
    split_by_change_point,
    temporal_precision,
    zseries_frame,
)
from src.errors import ContractError, FormatError
from src.synthetic import constant_series, step_series


class TestSeries:
    def test_zscore_of_two_points(self):
        np.testing.assert_allclose(normalize_zscore(np.array([0.0, 1.0])), [-1.0, 1.0])

    def test_zscore_of_constant_series(self):
        np.testing.assert_array_equal(normalize_zscore(np.full(5, 0.3)), np.zeros(5))

    def test_zscore_needs_two_values(self):
        with pytest.raises(ContractError):
            normalize_zscore(np.array([1.0]))

    def test_ratio_drops_empty_years(self):
        series = PosTimeSeries("w", np.array([1900, 1901, 1902]), np.array([3, 0, 1]), np.array([1, 0, 1]))
        ratio = noun_ratio(series)
        np.testing.assert_array_equal(ratio.years, [1900, 1902])
        np.testing.assert_allclose(ratio.values, [0.75, 0.5])

    def test_years_must_increase(self):
        with pytest.raises(ContractError):
            PosTimeSeries("w", np.array([1901, 1900]), np.array([1, 1]), np.array([1, 1]))

    def test_frequency_filter(self):
        years = np.arange(1900, 1904)
        series = {
            "common": PosTimeSeries("common", years, np.full(4, 200), np.full(4, 200)),
            "rare": PosTimeSeries("rare", years, np.full(4, 200), np.full(4, 10)),
        }
        assert list(frequency_filter(series, 500)) == ["common"]
        assert list(frequency_filter(series, 150, per_year=True)) == ["common"]
        assert frequency_filter(series, 1000) == {}

    def test_load_counts(self, tmp_path):
        path = tmp_path / "counts.csv"
        path.write_text("word,year,noun_count,verb_count\nmail,1901,5,1\nmail,1900,6,0\nbike,1900,1,1\n")
        series = load_counts(path)
        assert sorted(series) == ["bike", "mail"]
        np.testing.assert_array_equal(series["mail"].years, [1900, 1901])
        np.testing.assert_array_equal(series["mail"].noun_counts, [6, 5])

    @pytest.mark.parametrize("content", [
        "word,year,noun_count\nmail,1900,1\n",
        "word,year,noun_count,verb_count\nmail,1900,x,1\n",
        "word,year,noun_count,verb_count\nmail,1900,1,1\nmail,1900,2,2\n",
        "word,year,noun_count,verb_count\n",
    ])
    def test_malformed_counts(self, tmp_path, content):
        path = tmp_path / "counts.csv"
        path.write_text(content)
        with pytest.raises(FormatError):
            load_counts(path)

    @given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 1000)), min_size=1, max_size=30))
    def test_ratio_lies_in_unit_interval(self, counts):
        assume(any(n + v > 0 for n, v in counts))
        nouns, verbs = (np.array(c) for c in zip(*counts))
        ratio = noun_ratio(PosTimeSeries("w", np.arange(1900, 1900 + len(counts)), nouns, verbs))
        assert np.all((ratio.values >= 0.0) & (ratio.values <= 1.0))

    @given(st.lists(st.floats(0.0, 1.0), min_size=2, max_size=50))
    def test_zscore_moments(self, values):
        values = np.array(values)
        assume(np.ptp(values) > 1e-3)
        z = normalize_zscore(values)
        assert abs(z.mean()) < 1e-9
        assert abs(z.std() - 1.0) < 1e-9

    def test_zseries_frame(self):
        frame = zseries_frame({"step": step_series(n_years=20, change_at=10)})
        assert list(frame.columns) == ["word", "year", "ratio", "z"]
        assert len(frame) == 20
        assert frame["z"].mean() == pytest.approx(0.0, abs=1e-12)


class TestChangePoint:
    def test_step_is_located(self):
        hits = 0
        for trial in range(100):
            series = step_series(seed=trial)
            z = normalize_zscore(noun_ratio(series).values)
            point = detect_change_point(z, n_permutations=500, alpha=0.05, seed=trial, years=series.years)
            if point is not None and 48 <= point.index <= 52:
                hits += 1
        assert hits >= 95

    def test_constant_series_false_positive_rate(self):
        detections = 0
        trials = 100
        for trial in range(trials):
            z = normalize_zscore(noun_ratio(constant_series(seed=trial)).values)
            if detect_change_point(z, n_permutations=500, alpha=0.05, seed=trial) is not None:
                detections += 1
        rate = detections / trials
        assert rate <= 0.05 + 2 * np.sqrt(0.05 * 0.95 / trials)

    def test_scan_reports_year_and_decade(self):
        series = step_series(n_years=40, change_at=23, start_year=1850, seed=1)
        point = scan_change_point(normalize_zscore(noun_ratio(series).values), series.years, "step",
                                  n_permutations=200, seed=0)
        assert point.index == 23
        assert point.year == 1873
        assert point.decade == 1870
        assert point.p_value < 0.05

    def test_same_seed_same_p_value(self):
        z = normalize_zscore(noun_ratio(constant_series(n_years=30, seed=2)).values)
        first = scan_change_point(z, n_permutations=300, seed=9)
        second = scan_change_point(z, n_permutations=300, seed=9)
        assert first == second

    def test_series_too_short(self):
        with pytest.raises(ContractError):
            scan_change_point(np.zeros(8), min_segment=5)

    def test_detect_all(self):
        series = {
            "flat": constant_series("flat", seed=3),
            "step": step_series("step", seed=3),
            "rare": step_series("rare", per_year=2, seed=3),
        }
        config = ChangePointConfig(permutations=300, theta_f=500)
        found = detect_all(series, config, seed=0)
        assert "step" in [p.word for p in found]
        assert "rare" not in [p.word for p in found]


class TestSplit:
    @staticmethod
    def record(d, c, decade):
        gold = ((Interpretation("send", RelationType.INSTRUMENT), 1),)
        return SupervisedExample(Utterance(d, c), gold, source="historical", decade=decade)

    def test_partition_around_change_decade(self):
        dataset = Dataset((
            self.record("mail", "letter", 1940),
            self.record("mail", "package", 1950),
            self.record("mail", "friend", 1970),
            self.record("bike", "home", 1960),
        ), ())
        points = {"mail": ChangePoint("mail", 1953, 53, 0.01, 2.0)}
        partitions = split_by_change_point(dataset, points)
        assert list(partitions) == ["mail"]
        mail = partitions["mail"]
        assert mail.decade == 1950
        assert [e.utterance.context for e in mail.pre] == ["letter"]
        assert mail.post == [(Utterance("mail", "package"), 1950), (Utterance("mail", "friend"), 1970)]
        assert mail.interpretations == [Interpretation("send", RelationType.INSTRUMENT)]

    def test_records_need_decades(self):
        dataset = Dataset((self.record("mail", "letter", None),), ())
        with pytest.raises(ContractError):
            split_by_change_point(dataset, {})

    def test_usages_in_the_change_decade_count_as_next_decade(self):
        dataset = Dataset((
            self.record("mail", "letter", 1870),
            self.record("mail", "package", 1880),
            self.record("mail", "friend", 1900),
        ), ())
        partitions = split_by_change_point(dataset, {"mail": ChangePoint("mail", 1883, 83, 0.01, 2.0)})
        assert partitions["mail"].reference_decade == 1870

        exact = temporal_precision({"mail": [Utterance("mail", "package")]}, partitions)
        assert [(r.group, r.value) for r in exact] == [("1880", 1.0)]

        predicted = {"mail": [Utterance("mail", "package"), Utterance("mail", "friend")]}
        assert temporal_precision(predicted, partitions, "next-decade")[0].value == 0.5
        assert temporal_precision(predicted, partitions, "any-future")[0].value == 1.0
