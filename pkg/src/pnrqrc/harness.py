"""Experiment orchestration: configs, target functions, and the
interpolation / diagnostics / classification pipelines.

Every run is a pure function of its config document: reservoirs, splits
and sampling streams are all seeded from values recorded in the config,
and result rows carry (reservoir seed, sampling seed, config hash) so any
output file can be regenerated exactly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import datasets
from .detection import DetectorModel
from .encoding import preset, random_feature_reservoir, feature_encoded_network
from .learning import (
    DEFAULT_K,
    DEFAULT_RCOND,
    classify,
    conditioned_rank,
    design_matrix,
    fourier_spectrum,
    metrics,
    pca,
    predict,
    train,
)
from .network import random_reservoir
from .pipeline import (
    ReservoirPipeline,
    coherent_specs,
    distinguishable_specs,
    fock_specs,
    hybrid_specs,
    postselection_basis,
)
from .pipeline_unitary import intensity_features, pnr_features
from .propagation import build_input_state

CONFIG_VERSION = 1


# ---------------------------------------------------------------------------
# target functions


@dataclass(frozen=True)
class TargetFunction:
    """Finite sum of sinusoids on the task domain [0, 1]."""

    terms: tuple  # ((amplitude, frequency, phase), ...)

    def __call__(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.zeros_like(xs)
        for amp, freq, phase in self.terms:
            out = out + amp * np.cos(2 * np.pi * freq * xs + phase)
        return out


def random_targets(
    count: int,
    bandwidth: float,
    terms_per_function: int = 5,
    seed: int = 0,
) -> list:
    """Random band-limited targets: amplitudes uniform on [0, 1], phases on
    [0, 2*pi), frequencies on [0, bandwidth]."""
    if bandwidth < 0:
        raise ValueError("bandwidth must be non-negative")
    rng = np.random.default_rng(seed)
    targets = []
    for _ in range(count):
        terms = tuple(
            (
                float(rng.uniform(0, 1)),
                float(rng.uniform(0, bandwidth)),
                float(rng.uniform(0, 2 * np.pi)),
            )
            for _ in range(terms_per_function)
        )
        targets.append(TargetFunction(terms=terms))
    return targets


# ---------------------------------------------------------------------------
# config handling


class ConfigError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid config:\n" + "\n".join(self.problems))


_STATE_KINDS = (
    "fock",
    "distinguishable",
    "hybrid",
    "coherent-pnr",
    "coherent-intensity",
)

DEFAULT_CONFIG = {
    "version": CONFIG_VERSION,
    "ports": 5,
    "reservoir_seeds": [11, 12, 13, 14, 15],
    "encoding": {"preset": "spiral", "slope": 1.0, "phase_offsets": "spread"},
    "states": [
        {"name": "fock", "kind": "fock", "photons": [1, 1, 1, 1, 0]},
        {
            "name": "distinguishable",
            "kind": "distinguishable",
            "photons": [1, 1, 1, 1, 0],
        },
        {
            "name": "hybrid",
            "kind": "hybrid",
            "photons": [1, 1, 0, 0, 0],
            "alphas": [0.5, 0.5, 0, 0, 0],
        },
        {
            "name": "coherent-pnr",
            "kind": "coherent-pnr",
            "alphas": [0.5, 0.5, 0, 0, 0],
        },
        {
            "name": "coherent-intensity",
            "kind": "coherent-intensity",
            "alphas": [0.5, 0.5, 0.5, 0.5, 0],
        },
    ],
    "detector": {"eta": 0.9, "max_photons": 4, "n_samp": 100000, "exact": False},
    "expansion": {"relative_cutoff": 0.01, "max_order": 6, "sector_headroom": 2},
    "task": {
        "grid_points": 128,
        "split_ratio": 0.5,
        "split_seed": 202,
        "targets": {"count": 20, "bandwidth": 2.0, "terms": 5, "seed": 101},
    },
    "rank": {"k": DEFAULT_K},
    "rcond": DEFAULT_RCOND,
    "sampling_seed": 303,
}


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(source) -> dict:
    """Load and validate a config document (path, JSON text, or dict);
    missing fields take defaults."""
    if isinstance(source, dict):
        raw = source
    else:
        text = Path(source).read_text() if Path(str(source)).exists() else str(source)
        raw = json.loads(text)
    config = _merge(DEFAULT_CONFIG, raw)
    problems = []
    if config["version"] != CONFIG_VERSION:
        problems.append(f"version: expected {CONFIG_VERSION}, got {config['version']}")
    ports = config["ports"]
    if not isinstance(ports, int) or ports < 2:
        problems.append("ports: must be an integer >= 2")
    if not config["reservoir_seeds"]:
        problems.append("reservoir_seeds: must be non-empty")
    enc = config["encoding"]
    if enc["preset"] not in ("uniform-linear", "multi-linear", "spiral"):
        problems.append(f"encoding.preset: unknown preset {enc['preset']!r}")
    for i, state in enumerate(config["states"]):
        path = f"states[{i}]"
        kind = state.get("kind")
        if kind not in _STATE_KINDS:
            problems.append(f"{path}.kind: unknown kind {kind!r}")
            continue
        if kind in ("fock", "distinguishable", "hybrid"):
            photons = state.get("photons")
            if photons is None or len(photons) != ports:
                problems.append(f"{path}.photons: need {ports} entries")
        if kind in ("hybrid", "coherent-pnr", "coherent-intensity"):
            alphas = state.get("alphas")
            if alphas is None or len(alphas) != ports:
                problems.append(f"{path}.alphas: need {ports} entries")
    det = config["detector"]
    if not 0 <= det["eta"] <= 1:
        problems.append("detector.eta: must lie in [0, 1]")
    if det["max_photons"] < 0:
        problems.append("detector.max_photons: must be >= 0")
    if det["n_samp"] < 1:
        problems.append("detector.n_samp: must be >= 1")
    task = config["task"]
    if not 0 < task["split_ratio"] < 1:
        problems.append("task.split_ratio: must lie in (0, 1)")
    if task["grid_points"] < 2:
        problems.append("task.grid_points: must be >= 2")
    if problems:
        raise ConfigError(problems)
    return config


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def state_specs(state: dict, ports: int):
    """(per-port PortStateSpec list, measurement kind) for a config entry."""
    kind = state["kind"]
    if kind == "fock":
        return fock_specs(state["photons"]), "pnr"
    if kind == "distinguishable":
        return distinguishable_specs(state["photons"]), "pnr"
    if kind == "hybrid":
        return hybrid_specs(state["photons"], state["alphas"]), "pnr"
    if kind == "coherent-pnr":
        return coherent_specs(state["alphas"]), "pnr"
    if kind == "coherent-intensity":
        return coherent_specs(state["alphas"]), "intensity"
    raise ValueError(f"unknown state kind {kind!r}")


def _scheme(config: dict):
    enc = config["encoding"]
    return preset(
        enc["preset"],
        config["ports"],
        slope=enc.get("slope", 1.0),
        phase_offsets=enc.get("phase_offsets"),
    )


def _pipeline(config: dict, reservoir_seed: int, state: dict) -> ReservoirPipeline:
    specs, measurement = state_specs(state, config["ports"])
    exp = config["expansion"]
    sampling_seed = int(
        np.random.SeedSequence(
            config["sampling_seed"],
            spawn_key=(int(reservoir_seed), _state_index(config, state)),
        ).generate_state(1)[0]
    )
    return ReservoirPipeline(
        network=random_reservoir(config["ports"], int(reservoir_seed)),
        scheme=_scheme(config),
        specs=specs,
        detector=DetectorModel(
            eta=config["detector"]["eta"],
            max_photons=config["detector"]["max_photons"],
            n_samp=config["detector"]["n_samp"],
        ),
        measurement=measurement,
        relative_cutoff=exp["relative_cutoff"],
        max_expansion_order=exp.get("max_order"),
        sector_headroom=exp["sector_headroom"],
        sampling_seed=sampling_seed,
    )


def _state_index(config: dict, state: dict) -> int:
    return [s["name"] for s in config["states"]].index(state["name"])


# ---------------------------------------------------------------------------
# deterministic output writers


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# interpolation


def run_interpolation(config: dict, out_dir) -> dict:
    """Fit random band-limited targets with every (reservoir, state) case
    and report train/test MSE plus conditioned ranks."""
    config = load_config(config)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(config)
    task = config["task"]
    xs = np.arange(task["grid_points"]) / task["grid_points"]
    tspec = task["targets"]
    targets = random_targets(
        tspec["count"], tspec["bandwidth"], tspec["terms"], tspec["seed"]
    )
    splits = []
    n_train = int(round(task["split_ratio"] * len(xs)))
    for t in range(len(targets)):
        seed = np.random.SeedSequence(task["split_seed"], spawn_key=(t,))
        perm = np.random.default_rng(seed).permutation(len(xs))
        splits.append((np.sort(perm[:n_train]), np.sort(perm[n_train:])))
    exact = bool(config["detector"]["exact"])
    rows = []
    summary = {}
    for state in config["states"]:
        state_mses = []
        state_rcs = []
        for reservoir_seed in config["reservoir_seeds"]:
            pipe = _pipeline(config, reservoir_seed, state)
            dm = design_matrix(pipe.evaluator(exact), xs)
            report = conditioned_rank(
                dm, config["detector"]["n_samp"], config["rank"]["k"]
            )
            rcond = config["rcond"]
            if not exact:
                # align the regression cutoff with the conditioned-rank
                # threshold on the normalised Gram spectrum
                s = np.linalg.svd(dm.values, compute_uv=False)
                rcond = float(
                    np.sqrt(report.threshold * (s**2).sum()) / s[0]
                )
            for t, target in enumerate(targets):
                train_idx, test_idx = splits[t]
                ys = target(xs)
                weights = train(dm.values[:, train_idx], ys[train_idx], rcond)
                mse_train = metrics(
                    predict(weights, dm.values[:, train_idx])[0],
                    ys[train_idx],
                    "regression",
                )["mse"]
                mse_test = metrics(
                    predict(weights, dm.values[:, test_idx])[0],
                    ys[test_idx],
                    "regression",
                )["mse"]
                rows.append(
                    (
                        state["name"],
                        int(reservoir_seed),
                        pipe.sampling_seed,
                        t,
                        mse_train,
                        mse_test,
                        report.conditioned_rank,
                        chash,
                    )
                )
                state_mses.append(mse_test)
            state_rcs.append(report.conditioned_rank)
        summary[state["name"]] = {
            "median_test_mse": float(np.median(state_mses)),
            "mean_test_mse": float(np.mean(state_mses)),
            "mean_conditioned_rank": float(np.mean(state_rcs)),
        }
    rows.sort(key=lambda r: (r[0], r[1], r[3]))
    write_csv(
        out_dir / "mse.csv",
        [
            "state",
            "reservoir_seed",
            "sampling_seed",
            "target",
            "mse_train",
            "mse_test",
            "conditioned_rank",
            "config_hash",
        ],
        rows,
    )
    result = {
        "config_hash": chash,
        "rng": "numpy-pcg64",
        "kind": "interpolation",
        "cases": summary,
    }
    write_json(out_dir / "results.json", result)
    return result


# ---------------------------------------------------------------------------
# diagnostics


def run_diagnostics(config: dict, out_dir) -> dict:
    """Emit output functions, Fourier spectra with N_omega, and normalised
    singular-value spectra with conditioned ranks."""
    config = load_config(config)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(config)
    task = config["task"]
    xs = np.arange(task["grid_points"]) / task["grid_points"]
    exact = bool(config["detector"]["exact"])
    spectra_rows = []
    sval_rows = []
    function_rows = []
    summary = {}
    for state in config["states"]:
        per_reservoir_svals = []
        rcs = []
        n_omegas = []
        for reservoir_seed in config["reservoir_seeds"]:
            pipe = _pipeline(config, reservoir_seed, state)
            dm = design_matrix(pipe.evaluator(exact), xs)
            features = dm.feature_rows
            freqs, mags, n_omega = fourier_spectrum(xs, features)
            report = conditioned_rank(
                dm, config["detector"]["n_samp"], config["rank"]["k"]
            )
            rcs.append(report.conditioned_rank)
            n_omegas.append(n_omega)
            per_reservoir_svals.append(report.singular_values)
            top = np.argsort(features.max(axis=1))[::-1][:10]
            for rank_i, row in enumerate(top):
                for x, v in zip(xs, features[row]):
                    function_rows.append(
                        (
                            state["name"],
                            int(reservoir_seed),
                            pipe.sampling_seed,
                            rank_i,
                            float(x),
                            float(v),
                            chash,
                        )
                    )
            union = mags.max(axis=0)
            for f, m in zip(freqs, union):
                spectra_rows.append(
                    (
                        state["name"],
                        int(reservoir_seed),
                        pipe.sampling_seed,
                        float(f),
                        float(m),
                        chash,
                    )
                )
            for i, s in enumerate(report.singular_values):
                sval_rows.append(
                    (
                        state["name"],
                        int(reservoir_seed),
                        pipe.sampling_seed,
                        i,
                        float(s),
                        chash,
                    )
                )
        lengths = {len(s) for s in per_reservoir_svals}
        mean_svals = None
        if len(lengths) == 1:
            mean_svals = list(np.mean(per_reservoir_svals, axis=0))
        summary[state["name"]] = {
            "mean_conditioned_rank": float(np.mean(rcs)),
            "mean_n_omega": float(np.mean(n_omegas)),
            "mean_singular_values": mean_svals,
        }
    write_csv(
        out_dir / "functions.csv",
        ["state", "reservoir_seed", "sampling_seed", "rank", "x", "value", "config_hash"],
        function_rows,
    )
    write_csv(
        out_dir / "spectra.csv",
        ["state", "reservoir_seed", "sampling_seed", "frequency", "magnitude", "config_hash"],
        spectra_rows,
    )
    write_csv(
        out_dir / "svals.csv",
        ["state", "reservoir_seed", "sampling_seed", "index", "value", "config_hash"],
        sval_rows,
    )
    result = {
        "config_hash": chash,
        "rng": "numpy-pcg64",
        "kind": "diagnostics",
        "cases": summary,
    }
    write_json(out_dir / "results.json", result)
    return result


# ---------------------------------------------------------------------------
# classification

DEFAULT_CLASSIFICATION = {
    "pca_components": 20,
    "train_fraction": 0.5,
    "split_seed": 404,
    "reservoir_seed": 505,
}


def run_classification(config: dict, out_dir) -> dict:
    """PCA-compress images, encode the components as beamsplitter angles in
    the sandwich reservoir, and train a one-hot linear readout."""
    config = load_config(config)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(config)
    cls = _merge(DEFAULT_CLASSIFICATION, config.get("classification", {}))
    dataset = _load_classification_dataset(cls)
    flat = dataset.flat
    labels = dataset.labels.astype(int)
    rng = np.random.default_rng(cls["split_seed"])
    perm = rng.permutation(len(labels))
    n_train = int(round(cls["train_fraction"] * len(labels)))
    train_idx, test_idx = np.sort(perm[:n_train]), np.sort(perm[n_train:])
    n_components = cls["pca_components"]
    model = pca(flat[train_idx], n_components)
    projected = model.transform(flat)
    lo = projected[train_idx].min(axis=0)
    hi = projected[train_idx].max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    normalised = np.clip((projected - lo) / span, 0.0, 1.0)
    base = random_feature_reservoir(
        config["ports"], n_components, cls["reservoir_seed"]
    )
    detector = DetectorModel(
        eta=config["detector"]["eta"],
        max_photons=config["detector"]["max_photons"],
        n_samp=config["detector"]["n_samp"],
    )
    exact = bool(config["detector"]["exact"])
    exp = config["expansion"]
    basis = postselection_basis(config["ports"], detector.max_photons)
    basis_index = {occ: i for i, occ in enumerate(basis)}
    n_classes = int(labels.max()) + 1
    summary = {}
    rows = []
    for state in config["states"]:
        specs, measurement = state_specs(state, config["ports"])
        if measurement == "pnr":
            input_state = build_input_state(
                specs, exp["relative_cutoff"], exp.get("max_order")
            )
        feature_cols = []
        for i, feats in enumerate(normalised):
            u = feature_encoded_network(feats, base)
            if measurement == "intensity":
                vec = intensity_features(u, specs)
            else:
                seed = int(
                    np.random.SeedSequence(
                        config["sampling_seed"],
                        spawn_key=(_state_index(config, state), i),
                    ).generate_state(1)[0]
                )
                vec = pnr_features(
                    u,
                    input_state,
                    specs,
                    detector,
                    basis_index,
                    exact,
                    seed,
                    exp["sector_headroom"],
                )
                if vec is None:
                    vec = np.zeros(len(basis_index))
            feature_cols.append(vec)
        features = np.column_stack(feature_cols)
        features = np.vstack([features, np.ones(features.shape[1])])
        one_hot = np.zeros((n_classes, len(labels)))
        one_hot[labels, np.arange(len(labels))] = 1.0
        weights = train(
            features[:, train_idx], one_hot[:, train_idx], config["rcond"]
        )
        state_summary = {}
        for split_name, idx in (("train", train_idx), ("test", test_idx)):
            pred = classify(weights, features[:, idx])
            rep = metrics(pred, labels[idx], "classification")
            state_summary[split_name] = {
                "accuracy": rep["accuracy"],
                "mcc": rep["mcc"],
                "majority_accuracy": rep["majority_accuracy"],
            }
            rows.append(
                (
                    state["name"],
                    split_name,
                    cls["reservoir_seed"],
                    config["sampling_seed"],
                    rep["accuracy"],
                    rep["mcc"],
                    rep["majority_accuracy"],
                    chash,
                )
            )
        summary[state["name"]] = state_summary
    write_csv(
        out_dir / "classification.csv",
        [
            "state",
            "split",
            "reservoir_seed",
            "sampling_seed",
            "accuracy",
            "mcc",
            "majority_accuracy",
            "config_hash",
        ],
        rows,
    )
    result = {
        "config_hash": chash,
        "rng": "numpy-pcg64",
        "kind": "classification",
        "cases": summary,
    }
    write_json(out_dir / "results.json", result)
    return result


def _load_classification_dataset(cls: dict):
    if "dataset" in cls and cls["dataset"]:
        return datasets.read_dataset(cls["dataset"])
    synth = cls.get("synthetic", {"classes": 2, "per_class": 40, "seed": 7})
    return datasets.synthetic_blobs(**synth)


def show_network(config: dict, seed=None) -> dict:
    config = load_config(config)
    reservoir_seed = int(seed if seed is not None else config["reservoir_seeds"][0])
    return random_reservoir(config["ports"], reservoir_seed).to_dict()
