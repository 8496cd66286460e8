"""Command-line pipeline: stats, cooc, synth, train, tune, eval, predict.

Every command is deterministic given its flags (seeds are explicit), and
flags may come from a flat ``key = value`` config file via --config, with
command-line flags taking precedence.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import calibrate, chain, dataset, fusion, logreg, synth
from .errors import DataError, NumericalError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# options a command cannot run without; config files may supply them too,
# so they are checked after the config merge rather than by argparse
_REQUIRED = {
    "stats": ("taxonomy", "data"),
    "cooc": ("taxonomy", "data", "out"),
    "synth": ("out",),
    "train": ("taxonomy", "train_file", "model"),
    "tune": ("taxonomy", "model", "data"),
    "eval": ("taxonomy", "model", "data", "report"),
    "predict": ("taxonomy", "model", "data", "out"),
}


def _add_inference_flags(p):
    p.add_argument("--no-augment", action="store_true",
                   help="drop paraphrase records; use originals only")
    p.add_argument("--config", help="flat key = value config file; flags override it")


def build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="memechain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    commands: dict[str, _Parser] = {}

    p = sub.add_parser("stats", help="per-label gold counts over originals")
    p.add_argument("--taxonomy")
    p.add_argument("--data")
    p.add_argument("--out", help="also write the counts to this file")
    p.add_argument("--config")
    commands["stats"] = p

    p = sub.add_parser("cooc", help="label co-occurrence probabilities over originals")
    p.add_argument("--taxonomy")
    p.add_argument("--data")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--config")
    commands["cooc"] = p

    p = sub.add_parser("synth", help="generate a synthetic dataset file")
    p.add_argument("--out")
    p.add_argument("--taxonomy-out", help="also write the synthetic taxonomy here")
    p.add_argument("--n", type=int, default=1000, help="number of groups")
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--labels", type=int, default=4)
    p.add_argument("--correlation", type=float, default=0.5)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--augment", nargs=2, metavar=("COPIES", "SIGMA"), default=None,
                   help="add noisy paraphrase members: count and noise scale")
    p.add_argument("--config")
    commands["synth"] = p

    p = sub.add_parser("train", help="split, train the chain, tune the threshold")
    p.add_argument("--taxonomy")
    p.add_argument("--train", dest="train_file")
    p.add_argument("--model", help="model file to write")
    p.add_argument("--features", choices=fusion.MODES, default="fused")
    p.add_argument("--order", default="taxonomy",
                   help="'taxonomy' or comma-separated label indices")
    p.add_argument("--no-sharpen", action="store_true")
    p.add_argument("--fraction", type=float, default=0.1, help="validation group fraction")
    p.add_argument("--seed", type=int, default=0, help="split shuffle seed")
    p.add_argument("--metric", choices=calibrate.TUNING_METRICS, default="micro")
    p.add_argument("--l2", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--val-out", help="write the validation split to this file")
    _add_inference_flags(p)
    commands["train"] = p

    p = sub.add_parser("tune", help="re-tune the threshold of a trained model")
    p.add_argument("--taxonomy")
    p.add_argument("--model")
    p.add_argument("--data", help="labeled dataset to tune on")
    p.add_argument("--out", help="write updated model here (default: in place)")
    p.add_argument("--metric", choices=calibrate.TUNING_METRICS, default="micro")
    _add_inference_flags(p)
    commands["tune"] = p

    p = sub.add_parser("eval", help="score a trained model on a labeled dataset")
    p.add_argument("--taxonomy")
    p.add_argument("--model")
    p.add_argument("--data")
    p.add_argument("--report", help="metrics report output path")
    p.add_argument("--threshold", type=float, default=None,
                   help="override the model's tuned threshold")
    _add_inference_flags(p)
    commands["eval"] = p

    p = sub.add_parser("predict", help="emit per-group label sets and probabilities")
    p.add_argument("--taxonomy")
    p.add_argument("--model")
    p.add_argument("--data")
    p.add_argument("--out", help="JSONL output path")
    p.add_argument("--threshold", type=float, default=None)
    _add_inference_flags(p)
    commands["predict"] = p

    return parser, commands


def _load_config(path) -> dict[str, str]:
    entries: dict[str, str] = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    with fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line {line_no}: expected 'key = value'")
            key, value = line.split("=", 1)
            entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def _apply_config(command_parser: _Parser, entries: dict[str, str]) -> None:
    by_name: dict[str, argparse.Action] = {}
    for action in command_parser._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                by_name[opt[2:].replace("-", "_")] = action
    unknown = set(entries) - set(by_name)
    if unknown:
        raise UsageError(f"config keys not recognized: {sorted(unknown)}")
    defaults = {}
    for key, raw in entries.items():
        action = by_name[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[action.dest] = raw.lower() in ("1", "true", "yes")
        elif action.nargs == 2:
            parts = raw.split()
            if len(parts) != 2:
                raise UsageError(f"config key {key!r} needs 2 values")
            defaults[action.dest] = [(action.type or str)(v) for v in parts]
        else:
            try:
                defaults[action.dest] = (action.type or str)(raw)
            except ValueError:
                raise UsageError(f"config key {key!r}: invalid value {raw!r}")
            if action.choices and defaults[action.dest] not in action.choices:
                raise UsageError(f"config key {key!r}: {raw!r} not in {action.choices}")
    command_parser.set_defaults(**defaults)


def _check_required(args) -> None:
    missing = [name for name in _REQUIRED[args.command]
               if getattr(args, name, None) in (None, "")]
    if missing:
        flags = ", ".join("--" + name.replace("_file", "").replace("_", "-")
                          for name in missing)
        raise UsageError(f"{args.command}: missing required option(s): {flags}")


def _parse_order(text: str):
    """Syntax check only; returns None for the default taxonomy order."""
    if text == "taxonomy":
        return None
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--order must be 'taxonomy' or comma-separated ints, got {text!r}")


def _working_dataset(ds: dataset.Dataset, no_augment: bool) -> dataset.Dataset:
    return ds.originals() if no_augment else ds


def _inference(model: chain.ChainModel, ds: dataset.Dataset):
    """featurize -> predict -> optional sharpen -> group-average."""
    feats = fusion.featurize(ds, model.mode)
    probs = chain.predict_chain(model, feats)
    if model.sharpen:
        probs = chain.sharpen(probs)
    return calibrate.average_groups(probs, [ex.group for ex in ds.examples])


def _group_gold(ds: dataset.Dataset, group_ids) -> np.ndarray:
    by_group = {ex.group: ex for ex in ds.examples if ex.origin == dataset.ORIGINAL}
    mat = np.zeros((len(group_ids), len(ds.taxonomy)))
    for i, gid in enumerate(group_ids):
        gold = by_group[gid].gold
        if gold is None:
            raise DataError(f"group {gid!r} has no gold labels; dataset is unlabeled")
        mat[i, sorted(gold)] = 1.0
    return mat


def cmd_stats(args) -> int:
    taxonomy = dataset.Taxonomy.from_file(args.taxonomy)
    ds = dataset.load_dataset(args.data, taxonomy)
    counts = dataset.label_counts(ds)
    lines = [f"examples = {len(ds)}", f"groups = {len(ds.group_ids())}",
             f"originals = {len(ds.originals())}"]
    lines += [f"count[{name}] = {c}" for name, c in zip(taxonomy.labels, counts)]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def cmd_cooc(args) -> int:
    taxonomy = dataset.Taxonomy.from_file(args.taxonomy)
    ds = dataset.load_dataset(args.data, taxonomy).originals()
    matrix = calibrate.cooccurrence(dataset.gold_matrix(ds))
    calibrate.write_cooccurrence_csv(matrix, taxonomy, args.out)
    sys.stdout.write(f"wrote {len(taxonomy)}x{len(taxonomy)} co-occurrence matrix to {args.out}\n")
    return 0


def cmd_synth(args) -> int:
    copies, sigma = 0, 0.0
    if args.augment is not None:
        try:
            copies, sigma = int(args.augment[0]), float(args.augment[1])
        except ValueError:
            raise UsageError(f"--augment needs an int count and a float scale, got {args.augment}")
    try:
        cfg = synth.SynthConfig(
            n_examples=args.n, feature_dim=args.dim, n_labels=args.labels,
            correlation=args.correlation, noise=args.noise, seed=args.seed,
            augment_copies=copies, augment_noise=sigma,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    ds = synth.generate(cfg)
    dataset.save_dataset(ds, args.out)
    if args.taxonomy_out:
        ds.taxonomy.to_file(args.taxonomy_out)
    sys.stdout.write(f"wrote {len(ds)} records ({cfg.n_examples} groups) to {args.out}\n")
    return 0


def cmd_train(args) -> int:
    order = _parse_order(args.order)
    try:
        cfg = logreg.TrainConfig(
            l2_strength=args.l2, max_iterations=args.max_iter, gradient_tolerance=args.tol
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    if not 0.0 < args.fraction < 1.0:
        raise UsageError(f"--fraction must be in (0, 1), got {args.fraction}")
    taxonomy = dataset.Taxonomy.from_file(args.taxonomy)
    full = dataset.load_dataset(args.train_file, taxonomy)
    full = _working_dataset(full, args.no_augment)
    if order is None:
        order = tuple(range(len(taxonomy)))
    train_ds, val_ds = dataset.split_train_validation(full, args.fraction, args.seed)

    model = chain.train_chain(
        fusion.featurize(train_ds, args.features),
        dataset.gold_matrix(train_ds),
        order,
        cfg,
        taxonomy=taxonomy,
        mode=args.features,
        sharpen=not args.no_sharpen,
    )
    val_probs, val_groups = _inference(model, val_ds)
    val_gold = _group_gold(val_ds, val_groups)
    threshold = calibrate.tune_threshold(val_probs, val_gold, args.metric)
    model = chain.with_threshold(model, threshold)
    chain.save_model(model, args.model)
    if args.val_out:
        dataset.save_dataset(val_ds, args.val_out)

    report = calibrate.f1_scores(calibrate.apply_threshold(val_probs, threshold), val_gold)
    sys.stdout.write(f"threshold = {threshold:.17g}\n")
    sys.stdout.write(f"validation_micro_f1 = {report.micro_f1:.17g}\n")
    sys.stdout.write(f"validation_macro_f1 = {report.macro_f1:.17g}\n")
    return 0


def _load_model_for(args) -> tuple[chain.ChainModel, dataset.Dataset]:
    taxonomy = dataset.Taxonomy.from_file(args.taxonomy)
    model = chain.load_model(args.model)
    if model.taxonomy.labels != taxonomy.labels:
        raise DataError("model taxonomy does not match the taxonomy file")
    ds = dataset.load_dataset(args.data, taxonomy)
    return model, _working_dataset(ds, args.no_augment)


def cmd_tune(args) -> int:
    model, ds = _load_model_for(args)
    probs, group_ids = _inference(model, ds)
    gold = _group_gold(ds, group_ids)
    threshold = calibrate.tune_threshold(probs, gold, args.metric)
    model = chain.with_threshold(model, threshold)
    chain.save_model(model, args.out or args.model)
    report = calibrate.f1_scores(calibrate.apply_threshold(probs, threshold), gold)
    sys.stdout.write(f"threshold = {threshold:.17g}\n")
    sys.stdout.write(f"micro_f1 = {report.micro_f1:.17g}\n")
    sys.stdout.write(f"macro_f1 = {report.macro_f1:.17g}\n")
    return 0


def _decision_threshold(model: chain.ChainModel, override) -> float:
    if override is not None:
        return float(override)
    if model.threshold is None:
        raise DataError("model has no tuned threshold; run 'tune' or pass --threshold")
    return model.threshold


def cmd_eval(args) -> int:
    model, ds = _load_model_for(args)
    threshold = _decision_threshold(model, args.threshold)
    probs, group_ids = _inference(model, ds)
    gold = _group_gold(ds, group_ids)
    report = calibrate.f1_scores(calibrate.apply_threshold(probs, threshold), gold)
    calibrate.write_report(report, model.taxonomy, args.report)
    sys.stdout.write(f"micro_f1 = {report.micro_f1:.17g}\n")
    sys.stdout.write(f"macro_f1 = {report.macro_f1:.17g}\n")
    return 0


def cmd_predict(args) -> int:
    model, ds = _load_model_for(args)
    threshold = _decision_threshold(model, args.threshold)
    probs, group_ids = _inference(model, ds)
    decisions = calibrate.apply_threshold(probs, threshold)
    with open(args.out, "w", encoding="utf-8") as fh:
        for i, gid in enumerate(group_ids):
            record = {
                "group": gid,
                "labels": [model.taxonomy.labels[j] for j in np.flatnonzero(decisions[i])],
                "probabilities": probs[i].tolist(),
            }
            fh.write(json.dumps(record) + "\n")
    sys.stdout.write(f"wrote predictions for {len(group_ids)} groups to {args.out}\n")
    return 0


_HANDLERS = {
    "stats": cmd_stats,
    "cooc": cmd_cooc,
    "synth": cmd_synth,
    "train": cmd_train,
    "tune": cmd_tune,
    "eval": cmd_eval,
    "predict": cmd_predict,
}


def main(argv=None) -> int:
    parser, commands = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            _apply_config(commands[args.command], _load_config(args.config))
            args = parser.parse_args(argv)
        _check_required(args)
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except DataError as exc:
        sys.stderr.write(f"data error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"data error: {exc}\n")
        return 2
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
