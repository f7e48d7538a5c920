#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Command line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numerical failure.
"""

import argparse
import logging
import pathlib
import sys
from typing import Callable, Dict, List, Optional, Tuple

from planefinder.control import TrainConfig, TrainConfigError
from planefinder.control.configure import BaseConfigurerError
from planefinder.evaluation import (
    EvaluationError,
    annotate_video,
    bench,
    evaluate,
    evaluate_localization,
    read_videos,
    write_annotations,
)
from planefinder.evaluation.frames import prepare_frame
from planefinder.evaluation.retrieve import RetrievalReport, evaluate_retrieval
from planefinder.localize import LocalizationError, localize
from planefinder.meta.utils import read_pgm
from planefinder.net import (
    BUILTIN_ARCHITECTURES,
    InputShapeError,
    InvalidSpecError,
    Network,
    UnknownArchitectureError,
    WeightFileError,
    builtin_spec,
    load_weights,
    save_weights,
)
from planefinder.saliency import Method, SaliencyError, write_map_pgm
from planefinder.synth import CANVAS, Manifest, SynthError, gen_dataset, gen_video
from planefinder.tensor import TensorError
from planefinder.train import (
    AugmentationError,
    EmptyClassError,
    NumericalError,
    TrainingError,
    train,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    """Raised for command line arguments that parse but make no sense."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _shape(value: str) -> Tuple[int, int]:
    try:
        height, width = (int(v) for v in value.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HEIGHTxWIDTH, got {value!r}")
    return height, width


def _network(args: argparse.Namespace) -> Network:
    return load_weights(builtin_spec(args.spec), args.weights)


def _emit(text: str, out: Optional[pathlib.Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def cmd_gen_data(args: argparse.Namespace) -> int:
    train_part, test_part = gen_dataset(
        args.cases,
        args.per_class,
        args.background_ratio,
        args.seed,
        args.out,
        canvas=args.canvas,
        noise=args.noise,
        test_fraction=args.test_fraction,
        workers=args.workers,
    )
    for i in range(args.videos):
        gen_video(
            i,
            args.frames,
            args.seed,
            args.out / "videos" / f"video{i:04d}",
            canvas=args.canvas,
            noise=args.noise,
        )
    print(
        f"{len(train_part)} training and {len(test_part)} test images"
        f"{f', {args.videos} videos' if args.videos else ''} written to {args.out}"
    )
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    if args.config is not None:
        config = TrainConfig.from_file(args.config)
    else:
        config = TrainConfig.for_architecture(args.spec)
    if args.seed is not None:
        config.seed = args.seed
    spec = builtin_spec(args.spec, num_classes=config.num_classes)
    net, log = train(spec, Manifest.read(args.manifest), config, log_path=args.log)
    save_weights(net, args.out)
    print(f"Trained {spec.name} for {len(log)} iterations")
    if log.validation:
        best = min(loss for _, loss in log.validation)
        print(f"Best logged validation loss {best:.4f}")
    print(f"Weights written to {args.out}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    report = evaluate(_network(args), Manifest.read(args.manifest))
    _emit(report.dumps(), args.out)
    if args.confusion_out is not None:
        _emit(report.dumps_confusion(), args.confusion_out)
    print(report.summary())
    return EXIT_OK


def cmd_annotate(args: argparse.Namespace) -> int:
    net = _network(args)
    (video,) = read_videos([args.video])
    annotations = annotate_video(net, video, with_box=not args.no_box)
    if args.out is None:
        sys.stdout.write("".join(f"{a.dumps(i)}\n" for i, a in enumerate(annotations)))
    else:
        write_annotations(annotations, args.out)
    return EXIT_OK


def cmd_retrieve(args: argparse.Namespace) -> int:
    report: RetrievalReport = evaluate_retrieval(_network(args), read_videos(args.video))
    _emit(report.dumps(), args.out)
    print(report.summary())
    return EXIT_OK


def cmd_localize(args: argparse.Namespace) -> int:
    net = _network(args)
    if args.image is not None:
        if args.class_id is None:
            raise UsageError("--image needs --class.")
        image = prepare_frame(net, read_pgm(args.image))
        result = localize(net, image, args.class_id, method=args.method)
        box = "none" if result.box is None else result.box.dumps()
        print(f"{args.image.name}\t{args.class_id}\t{box}")
        if args.map is not None:
            write_map_pgm(args.map, result.confidence.values)
        return EXIT_OK
    if args.manifest is None:
        raise UsageError("localize needs --manifest or --image.")
    manifest = Manifest.read(args.manifest, args.boxes)
    report = evaluate_localization(net, manifest, method=args.method)
    _emit(report.dumps(), args.out)
    sys.stdout.write(report.dumps_summary())
    print(report.summary())
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    report = bench(args.arch, args.frames, args.warmup, args.seed or 0, args.canvas)
    _emit(report.dumps(), args.out)
    print(report.summary())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="planefinder",
        description="Detect and localise standard scan planes with weakly supervised CNNs.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def command(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        return p

    def model(p: argparse.ArgumentParser) -> None:
        p.add_argument("--spec", required=True, choices=BUILTIN_ARCHITECTURES)
        p.add_argument("--weights", required=True, type=pathlib.Path)

    def out(p: argparse.ArgumentParser, required: bool = False) -> None:
        p.add_argument("--out", type=pathlib.Path, required=required)

    p = command("gen-data", cmd_gen_data, "Render a synthetic dataset and sweeps.")
    out(p, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=10)
    p.add_argument("--per-class", type=int, default=200)
    p.add_argument("--background-ratio", type=float, default=24.0)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--canvas", type=_shape, default=CANVAS, help="HEIGHTxWIDTH")
    p.add_argument("--noise", type=float, default=0.25)
    p.add_argument("--videos", type=int, default=0)
    p.add_argument("--frames", type=int, default=2000)
    p.add_argument("--workers", type=int, default=None)

    p = command("train", cmd_train, "Train a network on image-level labels.")
    p.add_argument("--spec", required=True, choices=BUILTIN_ARCHITECTURES)
    p.add_argument("--manifest", required=True, type=pathlib.Path)
    p.add_argument("--config", type=pathlib.Path)
    p.add_argument("--seed", type=int)
    p.add_argument("--log", type=pathlib.Path)
    out(p, required=True)

    p = command("evaluate", cmd_evaluate, "Precision, recall and F1 on a manifest.")
    model(p)
    p.add_argument("--manifest", required=True, type=pathlib.Path)
    out(p)
    p.add_argument("--confusion-out", type=pathlib.Path, help="confusion matrix CSV")

    p = command("annotate", cmd_annotate, "Annotate every frame of a sweep.")
    model(p)
    p.add_argument("--video", required=True, type=pathlib.Path)
    p.add_argument("--no-box", action="store_true")
    out(p)

    p = command("retrieve", cmd_retrieve, "Retrieve the best frame of every class.")
    model(p)
    p.add_argument("--video", required=True, type=pathlib.Path, nargs="+")
    out(p)

    p = command("localize", cmd_localize, "Localise structures and score the boxes.")
    model(p)
    p.add_argument("--manifest", type=pathlib.Path)
    p.add_argument("--boxes", type=pathlib.Path)
    p.add_argument("--image", type=pathlib.Path)
    p.add_argument("--class", dest="class_id", type=int)
    p.add_argument("--map", type=pathlib.Path)
    p.add_argument("--method", type=Method.parse, default=Method.WEIGHTED)
    out(p)

    p = command("bench", cmd_bench, "Frame rates of the built-in architectures.")
    p.add_argument(
        "--arch",
        nargs="+",
        choices=BUILTIN_ARCHITECTURES,
        default=["smallnet", "sononet16", "sononet32", "sononet64"],
    )
    p.add_argument("--frames", type=int, default=50)
    p.add_argument("--warmup", type=int, default=5)
    p.add_argument("--canvas", type=_shape, default=CANVAS, help="HEIGHTxWIDTH")
    p.add_argument("--seed", type=int)
    out(p)
    return parser


_EXIT_CODES: List[Tuple[type, int]] = [
    (NumericalError, EXIT_NUMERICAL),
    (FloatingPointError, EXIT_NUMERICAL),
    (EmptyClassError, EXIT_DATA),
    (AugmentationError, EXIT_DATA),
    (SynthError, EXIT_DATA),
    (WeightFileError, EXIT_DATA),
    (EvaluationError, EXIT_DATA),
    (InputShapeError, EXIT_DATA),
    (TensorError, EXIT_DATA),
    (SaliencyError, EXIT_DATA),
    (LocalizationError, EXIT_DATA),
    (OSError, EXIT_DATA),
    (UnicodeDecodeError, EXIT_DATA),
    (UsageError, EXIT_USAGE),
    (TrainingError, EXIT_USAGE),
    (TrainConfigError, EXIT_USAGE),
    (BaseConfigurerError, EXIT_USAGE),
    (UnknownArchitectureError, EXIT_USAGE),
    (InvalidSpecError, EXIT_USAGE),
    # readers wrap their parse errors, so what is left comes from argument values
    (ValueError, EXIT_USAGE),
]


def exit_code(error: BaseException) -> Optional[int]:
    """Exit code for an exception; None if it is not an expected failure."""
    for kind, code in _EXIT_CODES:
        if isinstance(error, kind):
            return code
    return None


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    levels: Dict[int, int] = {0: logging.WARNING, 1: logging.INFO}
    logging.basicConfig(
        level=levels.get(args.verbose, logging.DEBUG),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except Exception as e:
        code = exit_code(e)
        if code is None:
            raise
        logger.debug("Command failed", exc_info=True)
        sys.stderr.write(f"planefinder {args.command}: {e}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
