"""Summary checks computed by the experiment presets."""
import pandas as pd

from app.experiments.presets import _ordering


def _table(rows):
    return pd.DataFrame(rows, columns=["policy", "adoption", "mean"])


def test_ordering_needs_every_pa_below_every_baseline():
    table = _table([
        ("pa1", 0.5, 30.0), ("pa2", 0.5, 10.0), ("pa3", 0.5, 10.0),
        ("baseline-patient", 0.5, 12.0), ("baseline-impatient", 0.5, 20.0),
    ])
    assert _ordering(table) == {"0.5": False}


def test_ordering_per_adoption_rate():
    table = _table([
        ("pa1", 0.1, 11.0), ("pa1-oracle", 0.1, 50.0),
        ("baseline-patient", 0.1, 12.0), ("baseline-impatient", 0.1, 20.0),
        ("pa1", 0.5, 13.0), ("baseline-patient", 0.5, 12.0), ("baseline-impatient", 0.5, 20.0),
    ])
    assert _ordering(table) == {"0.1": True, "0.5": False}


def test_ordering_skips_rates_without_both_baselines():
    table = _table([("pa1", 0.5, 10.0), ("baseline-patient", 0.5, 12.0)])
    assert _ordering(table) == {}
