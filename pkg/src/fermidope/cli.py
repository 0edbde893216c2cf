"""Command-line entry point.

Subcommands mirror the experiment kinds (prepare, compress, learn, test,
sweep) plus `verify` for checking a saved learned state against a saved
circuit.  Relative output paths resolve against $FERMIDOPE_OUT when it is
set.  Exit codes: 0 success, 2 precondition/configuration error,
3 statistical acceptance failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .doped import circuit_dumps, circuit_loads, prepare, random_doped_circuit
from .harness import ConfigError, ExperimentConfig, run, sweep, trials_csv
from .learner import LearnedState

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_STATISTICAL = 3

OUT_DIR_ENV = "FERMIDOPE_OUT"


def _resolve(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, path)
    return path


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, default=4, help="qubit count")
    p.add_argument("--t", type=int, default=1, help="non-Gaussian gate count / compression level")
    p.add_argument("--kappa", type=int, default=4, help="Majorana locality of each gate")
    p.add_argument("--seed", type=int, default=0, help="master seed; trials derive split streams")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--out", help="write the result document (JSON) here")
    p.add_argument("--csv", help="write per-trial rows (CSV) here")


def _add_learn_flags(p: argparse.ArgumentParser):
    p.add_argument("--eps", type=float, default=0.25, help="target trace distance")
    p.add_argument("--delta", type=float, default=1.0 / 3.0, help="failure probability")
    p.add_argument("--fixture", choices=("doped", "compressible"), default="doped")
    p.add_argument("--budget", choices=("default", "hoeffding"), default="hoeffding")
    p.add_argument("--c-tom", type=float, default=1.0, help="tomography budget constant")
    p.add_argument("--shots-override", type=int, help="replace the correlation copy count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermidope", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="prepare random doped states and report diagnostics")
    _add_common(p)
    p.add_argument("--save-circuit", help="write the first trial's circuit here")

    p = sub.add_parser("compress", help="compress doped states onto kappa*t qubits")
    _add_common(p)

    p = sub.add_parser("learn", help="learn a compressible state and verify it")
    _add_common(p)
    _add_learn_flags(p)
    p.add_argument("--save-state", help="write the first trial's learned state here")

    p = sub.add_parser("test", help="close/far test of the Gaussian dimension")
    _add_common(p)
    p.add_argument("--fixture", choices=("gaussian", "tplus", "compressible"), default="gaussian")
    p.add_argument("--eps-a", type=float, default=0.0)
    p.add_argument("--eps-b", type=float, default=0.4)
    p.add_argument("--delta", type=float, default=1.0 / 3.0)
    p.add_argument("--shots-override", type=int)

    p = sub.add_parser("sweep", help="cartesian sweep over n/t/kappa/eps with a CSV summary")
    _add_common(p)
    p.add_argument("--kind", choices=("prepare", "compress", "learn", "test"), default="compress")
    _add_learn_flags(p)
    p.add_argument("--eps-a", type=float, default=0.0)
    p.add_argument("--eps-b", type=float, default=0.4)
    p.add_argument("--grid-n", help="comma list, e.g. 4,6,8")
    p.add_argument("--grid-t", help="comma list")
    p.add_argument("--grid-kappa", help="comma list")
    p.add_argument("--grid-eps", help="comma list")
    p.add_argument("--grid-seed", help="comma list")

    p = sub.add_parser("verify", help="check a saved learned state against a saved circuit")
    p.add_argument("--learned", required=True, help="learned-state file")
    p.add_argument("--circuit", required=True, help="doped-circuit file")
    p.add_argument("--eps", type=float, default=0.25, help="acceptance threshold")
    return parser


def _config_from_args(args, kind: str) -> ExperimentConfig:
    fields = dict(
        kind=kind, n=args.n, t=args.t, kappa=args.kappa, seed=args.seed,
        trials=args.trials, mode=args.mode,
    )
    for name in ("eps", "delta", "eps_a", "eps_b", "fixture", "budget", "shots_override"):
        arg = name if hasattr(args, name) else None
        if arg is not None and getattr(args, name, None) is not None:
            fields[name] = getattr(args, name)
    if getattr(args, "c_tom", None) is not None:
        fields["c_tom"] = args.c_tom
    return ExperimentConfig(**fields)


def _emit(doc, args) -> None:
    out = _resolve(args.out)
    if out:
        doc.write(out)
        print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(doc.to_json())
    if args.csv:
        path = _resolve(args.csv)
        with open(path, "w") as fh:
            fh.write(trials_csv(doc))
        print(f"wrote {path}", file=sys.stderr)
    print(f"wall clock: {doc.wall_clock_s:.3f}s", file=sys.stderr)


def _cmd_run(args, kind: str) -> int:
    config = _config_from_args(args, kind)
    if kind == "prepare" and args.save_circuit:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed).spawn(1)[0])
        circuit = random_doped_circuit(config.n, config.t, config.kappa, rng)
        path = _resolve(args.save_circuit)
        with open(path, "w") as fh:
            fh.write(circuit_dumps(circuit))
        print(f"wrote {path}", file=sys.stderr)
    doc = run(config)
    if kind == "learn" and getattr(args, "save_state", None):
        from .harness import _fixture, _learn_budget  # reuse the run's fixture recipe
        from .learner import learn as _learn

        rng = np.random.default_rng(np.random.SeedSequence(config.seed).spawn(config.trials)[0])
        psi, _ = _fixture(config, rng)
        learned = _learn(psi, config.n, config._learn_t(),
                         _learn_budget(config, config._learn_t()), mode=config.mode, rng=rng)
        path = _resolve(args.save_state)
        with open(path, "w") as fh:
            fh.write(learned.dumps())
        print(f"wrote {path}", file=sys.stderr)
    _emit(doc, args)
    return EXIT_OK if doc.summary["acceptance_ok"] else EXIT_STATISTICAL


def _cmd_sweep(args) -> int:
    base = _config_from_args(args, args.kind)
    grid = {}
    for key, attr, cast in (("n", "grid_n", int), ("t", "grid_t", int),
                            ("kappa", "grid_kappa", int), ("eps", "grid_eps", float),
                            ("seed", "grid_seed", int)):
        raw = getattr(args, attr)
        if raw:
            grid[key] = [cast(x) for x in raw.split(",")]
    if not grid:
        raise ConfigError("sweep needs at least one --grid-* list")
    docs, csv_text = sweep(base, grid)
    path = _resolve(args.csv) or _resolve(f"sweep-{args.kind}.csv")
    with open(path, "w") as fh:
        fh.write(csv_text)
    print(f"wrote {path} ({len(docs)} cells)", file=sys.stderr)
    bad = [d for d in docs if not d.summary["acceptance_ok"]]
    return EXIT_STATISTICAL if bad else EXIT_OK


def _cmd_verify(args) -> int:
    from .learner import verify as verify_learned

    with open(args.learned) as fh:
        learned = LearnedState.loads(fh.read())
    with open(args.circuit) as fh:
        circuit = circuit_loads(fh.read())
    report = verify_learned(learned, prepare(circuit))
    print(f"trace_distance {report.trace_distance!r}")
    print(f"fidelity {report.fidelity!r}")
    print(f"postselect_rate {report.postselect_rate!r}")
    return EXIT_OK if report.trace_distance <= args.eps else EXIT_STATISTICAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_run(args, args.command)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
