"""Experiment orchestration: seeded runs, result documents, sweeps.

Every run derives one RNG stream per trial from the config seed via
SeedSequence.spawn, so serial and parallel execution agree and a repeated
run writes a byte-identical document.  Wall-clock time is kept on the
in-memory document and reported on stderr, never in the serialized
payload; re-running with the same config + seed reproduces the file
exactly.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__, metrology, ortho
from .doped import compress_state, prepare, random_doped_circuit, report_gate_counts
from .gaussian import GaussianUnitary
from .learner import (
    BoostingFailureError,
    hoeffding_budget,
    learn,
    plan_budget,
    verify,
)
from .states import StateVector, embed_with_zero_tail, fidelity, product, random_state, zero_state

KINDS = ("prepare", "compress", "learn", "test")
FIXTURES = ("doped", "compressible", "gaussian", "tplus")


class ConfigError(ValueError):
    """An experiment configuration violates a precondition."""


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: int = 4
    t: int = 1
    kappa: int = 4
    eps: float = 0.25
    delta: float = 1.0 / 3.0
    eps_a: float = 0.0
    eps_b: float = 0.4
    seed: int = 0
    mode: str = "exact"
    trials: int = 1
    fixture: str = "doped"
    budget: str = "hoeffding"
    c_tom: float = 1.0
    shots_override: int | None = None

    def validate(self) -> "ExperimentConfig":
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not 1 <= self.n <= 12:
            raise ConfigError(f"n must be in [1, 12] for the dense engine, got {self.n}")
        if self.t < 0 or self.kappa < 1:
            raise ConfigError("need t >= 0 and kappa >= 1")
        if self.mode not in ("exact", "sampled"):
            raise ConfigError(f"mode must be exact or sampled, got {self.mode!r}")
        if self.fixture not in FIXTURES:
            raise ConfigError(f"fixture must be one of {FIXTURES}, got {self.fixture!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.budget not in ("default", "hoeffding"):
            raise ConfigError(f"budget must be default or hoeffding, got {self.budget!r}")
        if self.kind in ("prepare", "compress") and self.fixture != "doped":
            raise ConfigError(f"kind {self.kind!r} requires the doped fixture")
        if self.kind == "compress" and self.kappa * self.t > self.n:
            raise ConfigError(f"compression needs kappa*t <= n, got {self.kappa * self.t} > {self.n}")
        if self.kind == "learn":
            if not (0 < self.eps <= 1 and 0 < self.delta <= 1):
                raise ConfigError("learn needs eps, delta in (0, 1]")
            if self.fixture not in ("doped", "compressible"):
                raise ConfigError("learn supports the doped and compressible fixtures")
            if self._learn_t() > self.n:
                raise ConfigError("learned core exceeds the register; reduce t or kappa")
        if self.kind == "test":
            if not 0 < self.delta <= 1:
                raise ConfigError("test needs delta in (0, 1]")
            if self.t >= self.n:
                raise ConfigError("test needs t < n")
            if self.eps_b <= np.sqrt((self.n - self.t) * self.eps_a):
                raise ConfigError("test needs eps_b > sqrt((n - t) * eps_a)")
            if self.fixture == "tplus" and self.t != 0:
                raise ConfigError("the tplus fixture is a far instance only for t = 0")
        return self

    def _learn_t(self) -> int:
        return self.t if self.fixture == "compressible" else min(self.kappa * self.t, self.n)


@dataclass
class ResultDocument:
    config: dict
    seed: int
    version: str
    records: list
    summary: dict
    wall_clock_s: float = field(default=0.0, compare=False)

    def payload(self) -> dict:
        # wall clock stays out so identical config + seed => identical bytes
        return {
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
            "records": self.records,
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, indent=2) + "\n"

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())


_DOCUMENT_SHAPE = (("config", dict), ("seed", int), ("version", str),
                   ("records", list), ("summary", dict))


def validate_document(payload: dict) -> None:
    """Structural schema check of a (parsed) result document payload."""
    for key, kind in _DOCUMENT_SHAPE:
        if key not in payload:
            raise ValueError(f"result document is missing {key!r}")
        if not isinstance(payload[key], kind):
            raise ValueError(f"result document field {key!r} is not a {kind.__name__}")
    ExperimentConfig(**payload["config"]).validate()  # config echo round-trips
    for record in payload["records"]:
        if not isinstance(record, dict) or "trial" not in record or "ok" not in record:
            raise ValueError("malformed trial record")
    for key in ("trials", "ok_rate", "acceptance_ok"):
        if key not in payload["summary"]:
            raise ValueError(f"summary is missing {key!r}")


def _jsonable(value):
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _tplus_state(n: int) -> StateVector:
    one = StateVector(1, np.array([1.0, np.exp(1j * np.pi / 4.0)]) / np.sqrt(2.0))
    out = one
    for _ in range(n - 1):
        out = product(out, one)
    return out


def _fixture(config: ExperimentConfig, rng):
    """Build the trial's input state plus fixture metadata."""
    if config.fixture == "doped":
        circuit = random_doped_circuit(config.n, config.t, config.kappa, rng)
        return prepare(circuit), {"circuit": circuit}
    if config.fixture == "compressible":
        g = GaussianUnitary(ortho.random_orthogonal(2 * config.n, rng), check=False)
        phi = random_state(config.t, rng)
        return g.apply(embed_with_zero_tail(phi, config.n)), {}
    if config.fixture == "gaussian":
        g = GaussianUnitary(ortho.random_orthogonal(2 * config.n, rng), check=False)
        return g.apply(zero_state(config.n)), {}
    return _tplus_state(config.n), {}


def _trial_prepare(config, rng):
    psi, meta = _fixture(config, rng)
    lambdas = ortho.normal_eigenvalues(metrology.correlation_exact(psi))
    gdim = int(np.sum(lambdas >= 1.0 - 1e-6))
    counts = report_gate_counts(meta["circuit"])
    floor = max(config.n - config.kappa * config.t, 0)
    return {
        "gaussian_dimension": gdim,
        "lambdas": [float(x) for x in lambdas],
        "rotations": counts.rotations,
        "reflections": counts.reflections,
        "non_gaussian_terms": counts.non_gaussian_terms,
        "ok": gdim >= floor,
    }


def _trial_compress(config, rng):
    psi, meta = _fixture(config, rng)
    form = compress_state(meta["circuit"])
    rotated = form.G.adjoint().apply(psi)
    block = rotated.amps.reshape(2**form.core_qubits, -1)
    tail_weight = float(1.0 - np.linalg.norm(block[:, 0]) ** 2)
    lambdas = ortho.normal_eigenvalues(metrology.correlation_exact(psi))
    gdim = int(np.sum(lambdas >= 1.0 - 1e-6))
    floor = max(config.n - config.kappa * config.t, 0)
    return {
        "core_qubits": form.core_qubits,
        "tail_weight": tail_weight,
        "reassembly_fidelity": fidelity(form.reassemble(), psi),
        "gaussian_dimension": gdim,
        "ok": tail_weight <= 1e-8 and gdim >= floor,
    }


def _learn_budget(config: ExperimentConfig, t_learn: int):
    make = plan_budget if config.budget == "default" else hoeffding_budget
    budget = make(config.n, t_learn, config.eps, config.delta, config.c_tom)
    if config.shots_override is not None:
        budget = budget.with_overrides(n_corr=config.shots_override)
    return budget


def _trial_learn(config, rng):
    psi, _ = _fixture(config, rng)
    t_learn = config._learn_t()
    budget = _learn_budget(config, t_learn)
    threshold = 1e-6 if config.mode == "exact" else config.eps
    try:
        learned = learn(psi, config.n, t_learn, budget, mode=config.mode, rng=rng)
    except BoostingFailureError as exc:
        return {"t_learn": t_learn, "boosting_failure": str(exc), "ok": False}
    report = verify(learned, psi)
    return {
        "t_learn": t_learn,
        "trace_distance": report.trace_distance,
        "fidelity": report.fidelity,
        "postselect_rate": report.postselect_rate,
        "term_tomography": report.term_tomography,
        "term_projection": report.term_projection,
        "copies_correlation": budget.N_corr,
        "copies_loop": budget.N_loop,
        "ok": report.trace_distance <= threshold,
    }


def _trial_test(config, rng):
    psi, _ = _fixture(config, rng)
    expected = "far" if config.fixture == "tplus" else "close"
    scheme = "exact" if config.mode == "exact" else "grouped"
    result = metrology.test_gaussian_dimension(
        psi,
        config.t,
        config.eps_a,
        config.eps_b,
        config.delta,
        rng=rng,
        shot_override=config.shots_override,
        scheme=scheme,
    )
    return {
        "verdict": result.verdict,
        "expected": expected,
        "lambda_t1": result.lambda_t1,
        "copies": result.copies,
        "ok": result.verdict == expected,
    }


_TRIALS = {
    "prepare": _trial_prepare,
    "compress": _trial_compress,
    "learn": _trial_learn,
    "test": _trial_test,
}


def _summarize(config: ExperimentConfig, records: list) -> dict:
    ok_rate = float(np.mean([r.get("ok", False) for r in records]))
    summary = {"trials": len(records), "ok_rate": ok_rate}
    metric = PRIMARY_METRIC[config.kind]
    values = [r[metric] for r in records if metric in r and not isinstance(r[metric], str)]
    if values:
        arr = np.asarray(values, dtype=float)
        summary[metric] = {
            "mean": float(arr.mean()),
            "median": float(np.median(arr)),
            "min": float(arr.min()),
            "max": float(arr.max()),
        }
    if config.kind == "test":
        summary["error_rate"] = 1.0 - ok_rate
        summary["acceptance_ok"] = (1.0 - ok_rate) <= config.delta
    elif config.kind == "learn" and config.mode == "sampled":
        summary["acceptance_ok"] = ok_rate >= 1.0 - config.delta
    else:
        summary["acceptance_ok"] = ok_rate == 1.0
    return summary


PRIMARY_METRIC = {
    "prepare": "gaussian_dimension",
    "compress": "tail_weight",
    "learn": "trace_distance",
    "test": "lambda_t1",
}


def run(config: ExperimentConfig) -> ResultDocument:
    config = config.validate()
    start = time.perf_counter()
    streams = np.random.SeedSequence(config.seed).spawn(config.trials)
    records = []
    for i, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        record = _TRIALS[config.kind](config, rng)
        record["trial"] = i
        records.append(_jsonable(record))
    summary = _jsonable(_summarize(config, records))
    doc = ResultDocument(
        config=_jsonable(asdict(config)),
        seed=config.seed,
        version=__version__,
        records=records,
        summary=summary,
        wall_clock_s=time.perf_counter() - start,
    )
    validate_document(doc.payload())
    return doc


def trials_csv(doc: ResultDocument) -> str:
    """Flat per-trial rows for one result document."""
    records = doc.records
    keys = sorted({k for r in records for k in r if k != "lambdas"})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for r in records:
        writer.writerow([r.get(k, "") for k in keys])
    return buf.getvalue()


SWEEPABLE = ("n", "t", "kappa", "eps", "seed", "mode", "fixture")


def sweep(base: ExperimentConfig, grid: dict) -> tuple:
    """Run the cartesian product of configs; never abort on a failing cell.

    Returns (documents, csv_text) where the CSV holds one row per
    (cell, trial) plus one summary row per cell; cells that raise are
    recorded with their error message and the sweep continues.
    """
    for key in grid:
        if key not in SWEEPABLE:
            raise ConfigError(f"cannot sweep over {key!r}; choose from {SWEEPABLE}")
    names = list(grid)
    metric_keys = ["trace_distance", "tail_weight", "gaussian_dimension", "lambda_t1",
                   "verdict", "ok"]
    header = names + ["row", "trial", *metric_keys, "mean", "median", "min", "max",
                      "ok_rate", "error"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)

    documents = []
    for values in itertools.product(*(grid[k] for k in names)):
        cell = dict(zip(names, values))
        prefix = [cell[k] for k in names]
        try:
            doc = run(replace(base, **cell))
        except Exception as exc:  # noqa: BLE001 - partial failure is recorded, sweep continues
            writer.writerow(prefix + ["error", "", *[""] * len(metric_keys),
                                      "", "", "", "", "", f"{type(exc).__name__}: {exc}"])
            continue
        documents.append(doc)
        for r in doc.records:
            writer.writerow(prefix + ["trial", r["trial"],
                                      *[r.get(k, "") for k in metric_keys],
                                      "", "", "", "", "", ""])
        stats = doc.summary.get(PRIMARY_METRIC[base.kind], {})
        writer.writerow(prefix + ["summary", "", *[""] * len(metric_keys),
                                  stats.get("mean", ""), stats.get("median", ""),
                                  stats.get("min", ""), stats.get("max", ""),
                                  doc.summary["ok_rate"], ""])
    return documents, buf.getvalue()
