#!/usr/bin/env python3
"""Generate NARMA-10 series, run the models and report the benchmark from the command line."""
import argparse
import logging
import pathlib
import sys
from typing import List, Optional, TypeVar

import numpy as np
import tabulate

import narmabench
from narmabench import errors
from narmabench._bench import (
    format_table,
    published_report,
    qrc_drive,
    report_run,
    run_bench,
    run_model,
    seeded_model_config,
    sweep_train_sizes,
    write_predictions_csv,
    write_records_csv,
)
from narmabench._config import (
    MODELS,
    BenchConfig,
    MemoryCapacitySpec,
    load_config,
    loads_config,
)
from narmabench._esn import EsnConfig
from narmabench._optim import TrainSpec
from narmabench._qlstm import QlstmConfig
from narmabench._qrc import Mode, QrcConfig, run_reservoir, write_trace_csv
from narmabench._quantum import haar_random_unitary
from narmabench._recurrent import LstmConfig
from narmabench._timeseries import SplitSpec, generate_narma10, write_series_csv

LOGGER = logging.getLogger(__name__)

T = TypeVar("T")


def _pick(value: Optional[T], default: T) -> T:
    return default if value is None else value


def _make_argument_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="narmabench", description=__doc__)
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + narmabench.__version__
    )
    parser.add_argument(
        "--verbose", help="Log the debug messages as well", action="store_true"
    )

    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    generate = subparsers.add_parser(
        "generate", help="Generate a NARMA-10 series and write it as CSV"
    )
    generate.add_argument("--length", help="Number of time steps", type=int, required=True)
    generate.add_argument("--seed", help="Seed of the data generator", type=int, default=0)
    generate.add_argument("--out", help="Path to the CSV file", required=True)

    run = subparsers.add_parser("run", help="Train and evaluate a single model")
    run.add_argument("--model", help="Model to run", choices=MODELS, required=True)
    run.add_argument(
        "--config", help="YAML configuration whose blocks serve as defaults"
    )
    run.add_argument("--seed", help="Master seed", type=int)
    run.add_argument("--n-train", help="Length of the train window", type=int)
    run.add_argument("--n-eval", help="Length of the eval window", type=int)
    run.add_argument("--ridge", help="Ridge coefficient of the readout", type=float)
    run.add_argument(
        "--washout", help="Leading reservoir steps excluded from the readout", type=int
    )

    run.add_argument("--nodes", help="ESN: number of reservoir nodes", type=int)
    run.add_argument("--rho", help="ESN: spectral radius", type=float)
    run.add_argument("--sparsity", help="ESN: fraction of nonzero internal weights", type=float)
    run.add_argument(
        "--input-sparsity", help="ESN: fraction of nonzero input weights", type=float
    )
    run.add_argument("--input-scale", help="ESN: range of the input weights", type=float)

    run.add_argument("--qubits", help="QRC and QLSTM: number of qubits", type=int)
    run.add_argument("--a-in", help="QRC: input angle scale", type=float)
    run.add_argument("--a-fb", help="QRC: feedback angle scale", type=float)
    run.add_argument("--shots", help="QRC: shots per time step", type=int)
    run.add_argument(
        "--mode",
        help="QRC: how the features are estimated",
        choices=[mode.value for mode in Mode],
    )
    run.add_argument("--trace", help="QRC: write the features of the whole series to this CSV")

    run.add_argument("--hidden", help="LSTM and QLSTM: hidden size", type=int)
    run.add_argument("--epochs", help="LSTM and QLSTM: number of epochs", type=int)
    run.add_argument("--lr", help="LSTM and QLSTM: learning rate of Adam", type=float)
    run.add_argument(
        "--window",
        help="LSTM and QLSTM: truncated back-propagation window, 0 unrolls the whole sequence",
        type=int,
    )
    run.add_argument(
        "--feed-y",
        help="LSTM and QLSTM: append the previous target to the input",
        action="store_true",
    )
    run.add_argument(
        "--no-forget-bias",
        help="LSTM: start the forget-gate biases at random values instead of 1",
        action="store_true",
    )
    run.add_argument("--qlayers", help="QLSTM: variational layers per gate circuit", type=int)
    run.add_argument(
        "--max-steps", help="QLSTM: truncate the train window to this many steps", type=int
    )
    run.add_argument(
        "--no-memory-capacity",
        help="Skip the memory capacity of the reservoir models",
        action="store_true",
    )
    run.add_argument("--out", help="Directory where results.csv and the predictions are written")

    bench = subparsers.add_parser("bench", help="Run the whole benchmark")
    bench.add_argument("--config", help="Path to the YAML configuration", required=True)
    bench.add_argument("--out", help="Overrides the output directory of the configuration")

    report = subparsers.add_parser("report", help="Report the results of a finished run")
    source = report.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="run_dir", help="Directory of the finished run")
    source.add_argument(
        "--published",
        help="Report the sustainability index of the published values",
        action="store_true",
    )

    sweep = subparsers.add_parser(
        "sweep", help="Retrain the models on train windows of different sizes"
    )
    sweep.add_argument("--config", help="Path to the YAML configuration", required=True)
    sweep.add_argument("--sizes", help="Train sizes", type=int, nargs="+", required=True)
    sweep.add_argument(
        "--out", help="Path to the CSV; sweep.csv in the output directory if omitted"
    )

    return parser


def _train_spec(spec: TrainSpec, args: argparse.Namespace) -> TrainSpec:
    return TrainSpec(
        epochs=_pick(args.epochs, spec.epochs),
        learning_rate=_pick(args.lr, spec.learning_rate),
        beta1=spec.beta1,
        beta2=spec.beta2,
        epsilon=spec.epsilon,
        window=_pick(args.window, spec.window),
        feed_y=spec.feed_y or bool(args.feed_y),
        seed=spec.seed,
    )


def override_config(config: BenchConfig, args: argparse.Namespace) -> BenchConfig:
    """
    Apply the command-line flags of ``run`` to the ``config``.

    Only the given flags change a value; the model runs exactly once.

    :param config: configuration from the file or the defaults
    :param args: parsed command-line arguments
    :return: configuration of the single run
    :raise errors.InvalidArgumentError: if a flag violates the invariants of a configuration
    """
    series = config.series
    esn = config.esn
    qrc = config.qrc
    lstm = config.lstm
    qlstm = config.qlstm

    n_qubits = _pick(args.qubits, qrc.n_qubits)

    return BenchConfig(
        seed=_pick(args.seed, config.seed),
        models=[args.model],
        repeats={args.model: 1},
        output_dir=config.output_dir,
        ridge=_pick(args.ridge, config.ridge),
        series=SplitSpec(
            n_train=_pick(args.n_train, series.n_train),
            n_eval=_pick(args.n_eval, series.n_eval),
            washout=series.washout,
        ),
        esn=EsnConfig(
            n_nodes=_pick(args.nodes, esn.n_nodes),
            spectral_radius=_pick(args.rho, esn.spectral_radius),
            internal_sparsity=_pick(args.sparsity, esn.internal_sparsity),
            input_sparsity=_pick(args.input_sparsity, esn.input_sparsity),
            input_scale=_pick(args.input_scale, esn.input_scale),
            washout=_pick(args.washout, esn.washout),
            seed=esn.seed,
        ),
        qrc=QrcConfig(
            n_qubits=n_qubits,
            a_in=_pick(args.a_in, qrc.a_in),
            a_fb=_pick(args.a_fb, qrc.a_fb),
            n_shots=_pick(args.shots, qrc.n_shots),
            seed=qrc.seed,
            washout=_pick(args.washout, qrc.washout),
            # Custom pairs only fit the register they were configured for.
            feedback_pairs=qrc.feedback_pairs if n_qubits == qrc.n_qubits else None,
        ),
        qrc_mode=Mode(args.mode) if args.mode is not None else config.qrc_mode,
        lstm=LstmConfig(
            hidden=_pick(args.hidden, lstm.hidden),
            forget_bias=lstm.forget_bias and not args.no_forget_bias,
            train=_train_spec(lstm.train, args),
        ),
        qlstm=QlstmConfig(
            hidden=_pick(args.hidden, qlstm.hidden),
            n_qubits=_pick(args.qubits, qlstm.n_qubits),
            n_layers=_pick(args.qlayers, qlstm.n_layers),
            projection_bias=qlstm.projection_bias,
            max_steps=_pick(args.max_steps, qlstm.max_steps),
            train=_train_spec(qlstm.train, args),
        ),
        memory_capacity=MemoryCapacitySpec(
            enabled=config.memory_capacity.enabled and not args.no_memory_capacity,
            k_max=config.memory_capacity.k_max,
            probe_length=config.memory_capacity.probe_length,
        ),
        sustainability_weights=config.sustainability_weights,
    )


def _write_trace(config: BenchConfig, u: np.ndarray, path: str) -> None:
    model_config = seeded_model_config(config, "qrc", config.seed)
    assert isinstance(model_config, QrcConfig)

    trace = run_reservoir(
        qrc_drive(u),
        model_config,
        mode=config.qrc_mode,
        reservoir=haar_random_unitary(model_config.n_qubits, model_config.seed),
    )
    write_trace_csv(trace, path)
    LOGGER.info("Wrote the QRC trace to %s", path)


def _run_single(args: argparse.Namespace) -> int:
    # Without a file the defaults still honor the seed override of the environment.
    base = load_config(args.config) if args.config is not None else loads_config("")
    config = override_config(base, args)

    series = generate_narma10(config.series.total, config.seed)
    run = run_model(config, args.model, series)

    print(format_table([run.record]))

    if args.out is not None:
        out_dir = pathlib.Path(args.out)
        (out_dir / "predictions").mkdir(parents=True, exist_ok=True)
        write_records_csv([run.record], out_dir / "results.csv")
        write_predictions_csv(run, out_dir / "predictions" / "{}-0.csv".format(args.model))
        LOGGER.info("Wrote the results to %s", out_dir)

    if args.trace is not None:
        if args.model != "qrc":
            LOGGER.warning("The --trace applies only to the qrc model; ignored.")
        else:
            _write_trace(config, series.u[: config.series.total], args.trace)

    return 0


def _report(args: argparse.Namespace) -> int:
    if args.published:
        table, report = published_report()
        print(table)
        print()
        print("Ranking: {}".format(" > ".join(model.upper() for model in report.ranking())))
        return 0

    print(report_run(args.run_dir), end="")
    return 0


def _sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config)

    if args.out is not None:
        output_path = pathlib.Path(args.out)
    else:
        output_path = pathlib.Path(config.output_dir) / "sweep.csv"
    output_path.parent.mkdir(parents=True, exist_ok=True)

    records = sweep_train_sizes(config, args.sizes, output_path=output_path)

    # fmt: off
    table = [
        [record.n_train, record.model.upper(), record.repeat,
         '{:.4f}'.format(record.nrmse) if not record.failed else 'failed']
        for record in records
    ]
    # fmt: on
    print(
        tabulate.tabulate(
            table,
            headers=["Train size", "Model", "Repetition", "NRMSE"],
            colalign=("right", "left", "right", "right"),
            tablefmt="pipe",
        )
    )
    return 0


def _execute(args: argparse.Namespace) -> int:
    if args.command == "generate":
        series = generate_narma10(args.length, args.seed)
        write_series_csv(series, args.out)
        LOGGER.info("Wrote %r to %s", series, args.out)
        return 0

    if args.command == "run":
        return _run_single(args)

    if args.command == "bench":
        config = load_config(args.config)
        result = run_bench(config, output_dir=args.out)
        print((result.run_dir / "report.md").read_text(encoding="utf-8"), end="")
        return 0 if all(not record.failed for record in result.records) else 1

    if args.command == "report":
        return _report(args)

    if args.command == "sweep":
        return _sweep(args)

    raise NotImplementedError("Unhandled command: {!r}".format(args.command))


def main(argv: Optional[List[str]] = None) -> int:
    """Execute the main routine."""
    parser = _make_argument_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
    )

    try:
        return _execute(args)
    except (
        errors.ConfigError,
        errors.InvalidArgumentError,
        errors.DivergenceError,
        errors.UndefinedMetricError,
    ) as err:
        print("{}: {}".format(type(err).__name__, err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
