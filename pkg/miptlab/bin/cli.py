#!/usr/bin/env python
# -*- coding: utf-8 -*-

import argparse
import json
import logging
import sys
import traceback
from typing import Any, Callable, Dict, List, Optional

from .. import get_module_version
from ..circuits import CircuitSpec, build_circuit, load_circuit_spec
from ..exact_decoder import analyze_circuit, write_report
from ..experiments import (
    AppendixBConfig,
    CoherentInfoConfig,
    ComplexityConfig,
    CrossingConfig,
    HistogramConfig,
    LearnabilityConfig,
    ScalabilityConfig,
    appendix_b_experiment,
    coherent_info_experiment,
    complexity_experiment,
    crossing_experiment,
    learnability_experiment,
    load_config,
    purification_hist_experiment,
    scalability_experiment,
)
from ..experiments.config import config_to_dict
from ..experiments.results import write_manifest, write_table
from ..nn.model import build_model
from ..nn.training import TrainConfig, evaluate, train
from ..readers import CheckpointReader
from ..trajectories import (
    generate_dataset,
    lightcone_window,
    purification_time,
    read_dataset,
    write_dataset,
)
from ..types import WindowSpec
from ..utils import io_utils
from ..writers import CheckpointWriter

###############################################################################

log = logging.getLogger(__name__)

LOG_FORMAT = "[%(levelname)4s: %(module)s:%(lineno)4s %(asctime)s] %(message)s"

EXPERIMENT_COMMANDS = (
    "purification-hist",
    "complexity",
    "learnability",
    "coherent-info",
    "crossing",
    "scalability",
    "appendix-b",
)

###############################################################################
# Args


class Args(argparse.Namespace):
    def __init__(self, argv: Optional[List[str]] = None):
        self.__parse(argv)

    def __parse(self, argv: Optional[List[str]]) -> None:
        # Setup parser
        p = argparse.ArgumentParser(
            prog="miptlab",
            description=(
                "Simulate monitored Clifford circuits, decode the reference qubit "
                "exactly or with a trained network, and run the learnability "
                "experiments."
            ),
        )
        p.add_argument(
            "--version", action="version", version=f"%(prog)s {get_module_version()}"
        )
        p.add_argument(
            "--debug",
            action="store_true",
            help="Log at debug level and show the traceback if the command fails.",
        )
        commands = p.add_subparsers(dest="command", required=True)

        # Experiments share --config / --out
        for name in EXPERIMENT_COMMANDS:
            sub = commands.add_parser(name, help=f"Run the {name} experiment.")
            sub.add_argument(
                "--config", default=None, help="YAML experiment config file."
            )
            sub.add_argument(
                "--out", required=True, help="Directory receiving CSVs and manifest."
            )
            sub.add_argument(
                "--scheduler",
                default=None,
                choices=("synchronous", "threads", "processes"),
                help="dask scheduler for the circuit fan-out.",
            )
            if name == "complexity":
                sub.add_argument(
                    "--init",
                    default=None,
                    choices=("product", "scrambled"),
                    help="Initial state; 'scrambled' runs the scrambled protocol.",
                )

        # Circuit-level commands
        decode = commands.add_parser(
            "exact-decode", help="Key measurement analysis of one circuit."
        )
        self._add_circuit_arguments(decode)
        decode.add_argument("--out", required=True, help="Report JSON path.")

        generate = commands.add_parser(
            "generate", help="Generate a labelled trajectory dataset."
        )
        self._add_circuit_arguments(generate)
        generate.add_argument("--n-trajectories", type=int, default=2000)
        generate.add_argument("--seed-offset", type=int, default=0)
        generate.add_argument(
            "--window",
            default="full",
            choices=("full", "lightcone"),
            help="Crop of every outcome matrix.",
        )
        generate.add_argument(
            "--force",
            action="store_true",
            help="Label unpurified circuits with keyed coin flips.",
        )
        generate.add_argument("--out", required=True, help="Dataset file path.")

        train_cmd = commands.add_parser("train", help="Train a decoder network.")
        train_cmd.add_argument("--dataset", required=True)
        train_cmd.add_argument("--epochs", type=int, default=None)
        train_cmd.add_argument("--batch", type=int, default=None)
        train_cmd.add_argument("--seed", type=int, default=0)
        train_cmd.add_argument("--out", required=True, help="Checkpoint path.")

        eval_cmd = commands.add_parser("eval", help="Score a checkpoint on a dataset.")
        eval_cmd.add_argument("--model", required=True)
        eval_cmd.add_argument("--dataset", required=True)
        eval_cmd.add_argument("--epsilon", type=float, default=None)
        eval_cmd.add_argument("--out", default=None, help="Optional JSON report path.")

        # Parse
        p.parse_args(argv, namespace=self)

    @staticmethod
    def _add_circuit_arguments(p: argparse.ArgumentParser) -> None:
        p.add_argument("--circuit", default=None, help="YAML circuit spec file.")
        p.add_argument("--L", type=int, default=None)
        p.add_argument("--T", type=int, default=None)
        p.add_argument("--p", type=float, default=None)
        p.add_argument("--seed", type=int, default=None, help="Circuit seed.")
        p.add_argument("--init", default=None, choices=("product", "scrambled"))
        p.add_argument(
            "--final-measurement-round",
            dest="final_measurement_round",
            action=argparse.BooleanOptionalAction,
            default=None,
            help="Follow the last unitary layer with a measurement round.",
        )
        p.add_argument(
            "--validate-tableau",
            action="store_true",
            help="Run the tableau invariant validator after every operation.",
        )


###############################################################################
# Commands


def circuit_spec_from_args(args: Args) -> CircuitSpec:
    """Spec file values overridden by explicit flags."""
    values: Dict[str, Any] = (
        load_circuit_spec(args.circuit).to_dict() if args.circuit else {}
    )
    flags = {
        "L": args.L,
        "T": args.T,
        "p": args.p,
        "circuit_seed": args.seed,
        "init": args.init,
        "final_measurement_round": args.final_measurement_round,
    }
    values.update({key: value for key, value in flags.items() if value is not None})
    values.setdefault("circuit_seed", 0)
    if args.L is not None:
        values["ref_site"] = None
    return CircuitSpec.from_dict(values)


def _run_experiment(args: Args) -> List[str]:
    overrides = {"scheduler": args.scheduler, "init": getattr(args, "init", None)}
    out = args.out
    outputs: List[str] = []

    def emit(name: str, rows: List[Dict[str, Any]]) -> None:
        write_table(rows, io_utils.join(out, name))
        outputs.append(name)

    config: Any
    if args.command == "purification-hist":
        config = load_config(HistogramConfig, args.config, overrides)
        emit("purification_histogram.csv", purification_hist_experiment(config))
    elif args.command == "complexity":
        config = load_config(ComplexityConfig, args.config, overrides)
        results = complexity_experiment(config)
        emit("complexity.csv", [r.to_row() for r in results])
        circuit_rows = [row for r in results for row in r.circuit_rows()]
        emit("complexity_circuits.csv", circuit_rows)
    elif args.command == "learnability":
        config = load_config(LearnabilityConfig, args.config, overrides)
        emit("learnability.csv", learnability_experiment(config).rows())
    elif args.command == "coherent-info":
        config = load_config(CoherentInfoConfig, args.config, overrides)
        series = coherent_info_experiment(config)
        emit("coherent_info.csv", [row for s in series for row in s.rows()])
    elif args.command == "crossing":
        config = load_config(CrossingConfig, args.config, overrides)
        result = crossing_experiment(config)
        emit("decay_rates.csv", result.rows())
        emit("crossing.csv", result.crossing_rows())
    elif args.command == "scalability":
        config = load_config(ScalabilityConfig, args.config, overrides)
        emit("scalability.csv", [c.to_row() for c in scalability_experiment(config)])
    else:
        config = load_config(AppendixBConfig, args.config, overrides)
        result = appendix_b_experiment(config)
        emit("appendix_b.csv", result.rows())
        emit("appendix_b_complexity.csv", result.complexity_rows())

    write_manifest(out, args.command, config_to_dict(config), outputs)
    return outputs


def _exact_decode(args: Args) -> None:
    instance = build_circuit(circuit_spec_from_args(args))
    report = analyze_circuit(instance, validate=args.validate_tableau)
    write_report(report, args.out)
    log.info(
        f"Circuit {report.fingerprint}: axis {report.axis.name}, "
        f"c={report.constant}, {len(report.key_set)} key measurements"
    )


def _generate(args: Args) -> None:
    instance = build_circuit(circuit_spec_from_args(args))
    window: Optional[WindowSpec] = None
    if args.window == "lightcone":
        t_p = purification_time(instance)
        window = lightcone_window(instance, t_p or instance.depth)
    dataset = generate_dataset(
        instance,
        args.n_trajectories,
        window=window,
        seed_offset=args.seed_offset,
        force=args.force,
        validate=args.validate_tableau,
    )
    write_dataset(dataset, args.out)
    log.info(f"Wrote {len(dataset)} trajectories to {args.out}")


def _train(args: Args) -> None:
    dataset = read_dataset(args.dataset)
    overrides = {"max_epochs": args.epochs, "batch_size": args.batch}
    config = TrainConfig.from_dict(
        {
            "init_seed": args.seed,
            "shuffle_seed": args.seed,
            **{key: value for key, value in overrides.items() if value is not None},
        }
    )
    depth, width = dataset.image_shape
    window = dataset.window or WindowSpec(width // 2, width, depth)
    model = build_model(window, len(dataset), init_seed=args.seed)
    train(model, dataset, config)
    CheckpointWriter.save(model, args.out)
    log.info(f"Saved {model} to {args.out}")


def _eval(args: Args) -> None:
    model = CheckpointReader(args.model).data
    dataset = read_dataset(args.dataset)
    kwargs = {} if args.epsilon is None else {"epsilon": args.epsilon}
    report = evaluate(model, dataset, **kwargs)
    log.info(
        f"Test error {report.error:.4f} on {report.n_test} trajectories "
        f"({'learned' if report.learned else 'not learned'} at ε={report.epsilon})"
    )
    if args.out is not None:
        payload = {
            "error": report.error,
            "n_test": report.n_test,
            "learned": report.learned,
            "epsilon": report.epsilon,
        }
        io_utils.write_text(args.out, json.dumps(payload, sort_keys=True, indent=2))


COMMANDS: Dict[str, Callable[[Args], Any]] = {
    "exact-decode": _exact_decode,
    "generate": _generate,
    "train": _train,
    "eval": _eval,
}


def run(args: Args) -> None:
    # Try running the command
    try:
        COMMANDS.get(args.command, _run_experiment)(args)

    # Catch any exception
    except Exception as e:
        log.error("=============================================")
        if args.debug:
            log.error("\n\n" + traceback.format_exc())
            log.error("=============================================")
        log.error("\n\n" + str(e) + "\n")
        log.error("=============================================")
        sys.exit(1)


###############################################################################
# Runner


def main(argv: Optional[List[str]] = None) -> None:
    args = Args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.debug else logging.INFO, format=LOG_FORMAT
    )
    run(args)


###############################################################################
# Allow caller to directly run this module (usually in development scenarios)

if __name__ == "__main__":
    main()
