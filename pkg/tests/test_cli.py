import json

import numpy as np
import pytest

from nftrunc.cli import main
from nftrunc.core import ContinuousSpectrum, DiscreteSpectrum, TimeSignal


@pytest.fixture()
def two_soliton_json(tmp_path):
    ds = DiscreteSpectrum(np.array([0.5j, 1.2j]), np.array([np.exp(0.4j), np.exp(-0.9j)]))
    path = tmp_path / "spec.json"
    ds.to_json(path)
    return path, ds


def test_synthesize_then_nft_round_trip(tmp_path, two_soliton_json):
    spec_path, ds = two_soliton_json
    sig_path = tmp_path / "sig.csv"
    rc = main(
        [
            "synthesize",
            "--spectrum",
            str(spec_path),
            "--out",
            str(sig_path),
            "--samples",
            "8192",
        ]
    )
    assert rc == 0
    sig = TimeSignal.from_csv(sig_path)
    assert len(sig) == 8192

    out_ds = tmp_path / "recovered.json"
    out_cs = tmp_path / "cont.csv"
    rc = main(
        [
            "nft",
            "--signal",
            str(sig_path),
            "--out-discrete",
            str(out_ds),
            "--out-continuous",
            str(out_cs),
            "--omega-points",
            "1024",
            "--seeds",
            "0.45j,1.1j",
        ]
    )
    assert rc == 0
    rec = DiscreteSpectrum.from_json(out_ds)
    assert len(rec) == 2
    assert np.max(np.abs(rec.eigenvalues - ds.eigenvalues)) < 1e-4
    assert np.max(np.abs(rec.b - ds.b)) < 1e-3
    cs = ContinuousSpectrum.from_csv(out_cs)
    assert len(cs) == 1024


def test_nft_without_seeds_counts_and_finds(tmp_path, two_soliton_json):
    spec_path, ds = two_soliton_json
    sig_path = tmp_path / "sig.csv"
    main(["synthesize", "--spectrum", str(spec_path), "--out", str(sig_path), "--samples", "8192"])
    out_ds = tmp_path / "auto.json"
    out_cs = tmp_path / "cont.csv"
    rc = main(
        [
            "nft",
            "--signal",
            str(sig_path),
            "--out-discrete",
            str(out_ds),
            "--out-continuous",
            str(out_cs),
            "--omega-points",
            "2048",
        ]
    )
    assert rc == 0
    rec = DiscreteSpectrum.from_json(out_ds)
    assert len(rec) == 2
    assert np.max(np.abs(rec.eigenvalues - ds.eigenvalues)) < 1e-3


def test_truncate_analytic_and_eigs_from_continuous(tmp_path):
    model_path = tmp_path / "model.json"
    model_path.write_text(json.dumps({"sigmas": [0.5, 1.0, 1.5, 2.0], "phi": 0.7, "T": 5.0}))
    out_ds = tmp_path / "anal_discrete.json"
    out_cs = tmp_path / "anal_cont.csv"
    rc = main(
        [
            "truncate-analytic",
            "--model",
            str(model_path),
            "--out-discrete",
            str(out_ds),
            "--out-continuous",
            str(out_cs),
        ]
    )
    assert rc == 0
    anal = DiscreteSpectrum.from_json(out_ds)
    assert abs(anal.eigenvalues[0].imag - 0.4908) < 2e-3

    fit_path = tmp_path / "fit.json"
    rc = main(
        [
            "eigs-from-continuous",
            "--continuous",
            str(out_cs),
            "--out",
            str(fit_path),
        ]
    )
    assert rc == 0
    doc = json.loads(fit_path.read_text())
    assert len(doc["eigenvalues"]) == 4
    fitted = sorted(e["im"] for e in doc["eigenvalues"])
    assert abs(fitted[0] - 0.4908) < 1e-2


def test_experiment_subcommand(tmp_path):
    cfg_path = tmp_path / "exp.toml"
    cfg_path.write_text(
        "[experiment]\n"
        "sigmas = [0.5, 1.0, 1.5, 2.0]\n"
        "T_values = [4.0]\n"
        "n_trials = 2\n"
        "rng_seed = 5\n"
        "samples_per_pulse = 4000\n"
        "omega_count = 512\n"
    )
    out_dir = tmp_path / "report"
    rc = main(["experiment", "--config", str(cfg_path), "--out", str(out_dir)])
    assert rc == 0
    for name in ("summary.json", "fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv"):
        assert (out_dir / name).exists()
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["config"]["n_trials"] == 2


def test_exit_code_validation_error(tmp_path):
    rc = main(
        [
            "synthesize",
            "--spectrum",
            str(tmp_path / "missing.json"),
            "--out",
            str(tmp_path / "x.csv"),
        ]
    )
    assert rc == 2


def test_exit_code_numerical_error(tmp_path):
    # an analytic model whose window sits below the tail shift is refused
    # upstream as validation; numerical failure needs a solver to give up:
    # scattering a wide noisy signal deep in the upper half-plane overflows
    rng = np.random.default_rng(0)
    t = np.linspace(-30, 30, 2000)
    sig = TimeSignal(t[0], t[1] - t[0], (1.0 / np.cosh(t)).astype(complex))
    sig_path = tmp_path / "sig.csv"
    sig.to_csv(sig_path)
    rc = main(
        [
            "nft",
            "--signal",
            str(sig_path),
            "--out-discrete",
            str(tmp_path / "d.json"),
            "--out-continuous",
            str(tmp_path / "c.csv"),
            "--omega-points",
            "256",
            "--seeds",
            "25j",
        ]
    )
    assert rc == 3
