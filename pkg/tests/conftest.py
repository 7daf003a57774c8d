"""Shared fixtures: one session-scoped end-to-end pipeline on forum1, plus
a reporter that prints one PASS/FAIL line per acceptance criterion."""

from __future__ import annotations

from dataclasses import dataclass

import pytest

from pwlab import features, synth


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.get_closest_marker("acceptance"):
        status = "PASS" if report.passed else "FAIL"
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        reporter = item.config.pluginmanager.get_plugin("terminalreporter")
        if reporter is not None:
            reporter.write_line(f"[{status}] {doc}")
from pwlab.features import SplitSpec, apply_scaler, featurize, fit_scaler, split, undersample
from pwlab.learn import evaluate, fit_model


@dataclass
class Forum1Pipeline:
    """Artifacts of one full run on the forum1 preset at acceptance scale."""

    corpus: list
    dataset: features.LabeledDataset
    train: features.LabeledDataset
    val: features.LabeledDataset
    test: features.LabeledDataset
    scaler: features.ScalerParams
    train_scaled: features.LabeledDataset
    val_scaled: features.LabeledDataset
    test_scaled: features.LabeledDataset
    balanced: features.LabeledDataset
    models: dict
    test_metrics: dict


@pytest.fixture(scope="session")
def forum1_pipeline() -> Forum1Pipeline:
    preset = synth.load_preset("forum1")
    corpus = synth.generate(preset, size=100_000, seed=42)
    dataset = featurize([p.text for p in corpus])
    train, val, test = split(dataset, SplitSpec(seed=42))
    scaler = fit_scaler(train)
    train_scaled = apply_scaler(train, scaler)
    val_scaled = apply_scaler(val, scaler)
    test_scaled = apply_scaler(test, scaler)
    balanced = undersample(train_scaled, seed=42)
    models = {}
    test_metrics = {}
    for kind in ("dt", "rf", "lr", "mlp", "svm", "stack"):
        model = fit_model(kind, balanced.X, balanced.y, scaler, seed=42)
        models[kind] = model
        _, metrics = evaluate(model.predict(test_scaled.X), test_scaled.y)
        test_metrics[kind] = metrics
    return Forum1Pipeline(
        corpus=corpus,
        dataset=dataset,
        train=train,
        val=val,
        test=test,
        scaler=scaler,
        train_scaled=train_scaled,
        val_scaled=val_scaled,
        test_scaled=test_scaled,
        balanced=balanced,
        models=models,
        test_metrics=test_metrics,
    )
