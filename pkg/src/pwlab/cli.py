"""Single entrypoint for the password-analysis workflow.

Subcommands mirror the pipeline stages: clean, stats, synth, featurize,
split, train, grid, evaluate, score, serve. Every artifact one stage writes
is readable by the next with no manual edits. Outputs are written to a
temporary file and renamed atomically, so an interrupted run never leaves a
half-written dataset. All stochastic stages echo their effective seed to
stderr and are reproducible bit-for-bit from (inputs, seed).

Exit codes: 0 success, 1 runtime error (single-line diagnostic on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import os
import signal
import sys
import tempfile

from . import analytics, corpus, features, service, synth
from .learn import MODEL_KINDS, build_params, evaluate, fit_model
from .learn.grid import DEFAULT_GRIDS, grid_search

DEFAULT_SEED = 42


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pwlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _echo_seed(seed: int) -> None:
    print(f"seed: {seed}", file=sys.stderr)


def _parse_value(text: str):
    low = text.lower()
    if low in ("none", "null"):
        return None
    if low == "true":
        return True
    if low == "false":
        return False
    if "+" in text:
        return tuple(int(part) for part in text.split("+"))
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _parse_params(spec: str | None) -> dict:
    if not spec:
        return {}
    out = {}
    for pair in spec.split(","):
        if "=" not in pair:
            raise ValueError(f"--params entries must look like key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = _parse_value(value.strip())
    return out


# --- subcommand implementations ---


def _cmd_clean(args) -> int:
    raw = _read(args.input)
    lines = raw.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    if args.counted:
        passwords, report = corpus.clean_counted(lines, args.min_len, args.max_len)
    else:
        schema = corpus.RecordSchema.parse(args.schema, args.delimiter)
        records = corpus.parse_records(lines, schema)
        passwords, report = corpus.clean(records, schema, args.min_len, args.max_len)
    _write_atomic(args.out, corpus.write_corpus_tsv(passwords))
    report_json = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.report:
        _write_atomic(args.report, report_json.encode("utf-8"))
    else:
        sys.stderr.write(report_json)
    return 0


def _cmd_stats(args) -> int:
    passwords = corpus.read_corpus_tsv(_read(args.input))
    dataset_id = args.dataset_id or os.path.splitext(os.path.basename(args.input))[0]
    report = analytics.build_report(passwords, dataset_id, k=args.top)
    payload = analytics.emit_report(report, args.format)
    if args.out:
        _write_atomic(args.out, payload)
    else:
        sys.stdout.buffer.write(payload)
    return 0


def _cmd_synth(args) -> int:
    preset = synth.load_preset(args.preset)
    if args.strong_rate is not None:
        preset = dataclasses.replace(preset, strong_rate=args.strong_rate)
    seed = preset.seed if args.seed is None else args.seed
    _echo_seed(seed)
    generated = synth.generate(preset, size=args.size, seed=seed)
    _write_atomic(args.out, corpus.write_corpus_tsv(generated))
    return 0


def _cmd_featurize(args) -> int:
    passwords = corpus.read_corpus_tsv(_read(args.input))
    dataset = features.featurize([p.text for p in passwords])
    _write_atomic(args.out, features.to_csv(dataset))
    return 0


def _cmd_split(args) -> int:
    fracs = [float(f) for f in args.fractions.split(",")]
    if len(fracs) != 3:
        raise ValueError("--fractions must be three comma-separated numbers")
    _echo_seed(args.seed)
    dataset = features.from_csv(_read(args.input))
    spec = features.SplitSpec(fracs[0], fracs[1], fracs[2], args.seed)
    train, val, test = features.split(dataset, spec)
    _write_atomic(args.train, features.to_csv(train))
    _write_atomic(args.val, features.to_csv(val))
    _write_atomic(args.test, features.to_csv(test))
    return 0


def _prepare_training(path: str, seed: int, balance: bool):
    raw = _read(path)
    train = features.from_csv(raw)
    scaler = features.fit_scaler(train)
    scaled = features.apply_scaler(train, scaler)
    if balance:
        scaled = features.undersample(scaled, seed)
    digest = "sha256:" + hashlib.sha256(raw).hexdigest()
    return scaled, scaler, digest


def _cmd_train(args) -> int:
    _echo_seed(args.seed)
    scaled, scaler, digest = _prepare_training(args.train, args.seed, not args.no_undersample)
    params = build_params(args.model, _parse_params(args.params))
    metadata = {"seed": args.seed, "corpus_digest": digest, "timestamp": args.timestamp}
    model = fit_model(
        args.model, scaled.X, scaled.y, scaler, params=params, seed=args.seed, metadata=metadata
    )
    _write_atomic(args.out, service.save_model(model))
    return 0


def _cmd_grid(args) -> int:
    _echo_seed(args.seed)
    scaled, scaler, digest = _prepare_training(args.train, args.seed, not args.no_undersample)
    val = features.from_csv(_read(args.val))
    val_scaled = features.apply_scaler(val, scaler)
    if args.grid:
        grid = json.loads(_read(args.grid).decode("utf-8"))
    else:
        grid = DEFAULT_GRIDS[args.model]
    result = grid_search(
        args.model, grid, scaled.X, scaled.y, val_scaled.X, val_scaled.y, seed=args.seed
    )
    lines = ["cell_id,params,val_f1,val_accuracy,val_recall"]
    for cell in result.table:
        params_text = ";".join(f"{k}={v}" for k, v in cell.params.items())
        lines.append(f'{cell.cell_id},"{params_text}",{cell.val_f1},{cell.val_accuracy},{cell.val_recall}')
    _write_atomic(args.scores, ("\n".join(lines) + "\n").encode("utf-8"))
    best = build_params(args.model, _coerce_grid_cell(result.best_params))
    metadata = {
        "seed": args.seed,
        "corpus_digest": digest,
        "timestamp": args.timestamp,
        "grid_best_cell": result.best_cell_id,
    }
    model = fit_model(
        args.model, scaled.X, scaled.y, scaler, params=best, seed=args.seed, metadata=metadata
    )
    _write_atomic(args.out, service.save_model(model))
    print(f"best cell {result.best_cell_id}: {result.best_params}", file=sys.stderr)
    return 0


def _coerce_grid_cell(cell: dict) -> dict:
    out = dict(cell)
    if isinstance(out.get("hidden_sizes"), list):
        out["hidden_sizes"] = tuple(out["hidden_sizes"])
    return out


def _cmd_evaluate(args) -> int:
    model = service.load_model(_read(args.model))
    data = features.from_csv(_read(args.data))
    rows = features.scale_rows(data.X, model.scaler)
    cm, metrics = evaluate(model.predict(rows), data.y)
    header = "accuracy,recall,f1,precision,tp,fp,fn,tn"
    row = (
        f"{metrics.accuracy},{metrics.recall},{metrics.f1},{metrics.precision},"
        f"{cm.tp},{cm.fp},{cm.fn},{cm.tn}"
    )
    payload = f"{header}\n{row}\n".encode("utf-8")
    if args.out:
        _write_atomic(args.out, payload)
    else:
        sys.stdout.buffer.write(payload)
    print(
        f"accuracy={metrics.accuracy:.4f} recall={metrics.recall:.4f} f1={metrics.f1:.4f}",
        file=sys.stderr,
    )
    return 0


def _cmd_score(args) -> int:
    model = service.load_model(_read(args.model))
    password = args.password if args.password is not None else sys.stdin.readline().rstrip("\n")
    try:
        response = service.score(password, model)
    except service.ValidationError as e:
        print(json.dumps({"error": str(e), "rule": e.rule}))
        return 1
    print(json.dumps(response.to_dict()))
    return 0


def _cmd_serve(args) -> int:
    model = service.load_model(_read(args.model))
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"--bind must look like HOST:PORT, got {args.bind!r}")
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(name)s: %(message)s")
    server = service.create_server(model, host, int(port_text), args.cors_origin)

    def _shutdown(signum, frame) -> None:
        # shutdown() must run off the serving thread; spawn a helper
        import threading

        threading.Thread(target=server.shutdown, daemon=True).start()

    signal.signal(signal.SIGINT, _shutdown)
    signal.signal(signal.SIGTERM, _shutdown)
    print(f"serving {args.model} on http://{host}:{int(port_text)}", file=sys.stderr)
    server.serve_forever()
    server.server_close()
    return 0


# --- parser ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwlab",
        description="Password corpus cleaning, characterization, classification, and scoring.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="maximum worker threads (the current implementation runs serially; "
        "results are identical either way)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="parse a leak dump and run the cleaning pipeline")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="cleaned corpus TSV (<count><TAB><password>)")
    p.add_argument("--schema", default="serial,email,password",
                   help="comma-separated field roles (serial|email|username|password)")
    p.add_argument("--delimiter", default=";", help="single printable ASCII field delimiter")
    p.add_argument("--counted", action="store_true",
                   help="input is already corpus TSV; honor its counts")
    p.add_argument("--min-len", type=int, default=corpus.DEFAULT_MIN_LENGTH)
    p.add_argument("--max-len", type=int, default=corpus.DEFAULT_MAX_LENGTH)
    p.add_argument("--report", help="write the cleaning report JSON here instead of stderr")
    p.set_defaults(func=_cmd_clean)

    p = sub.add_parser("stats", help="characterize a cleaned corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.add_argument("--dataset-id")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("synth", help="generate a synthetic corpus from a preset")
    p.add_argument("--preset", required=True, help="packaged preset name or a preset JSON path")
    p.add_argument("--size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--strong-rate", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("featurize", help="extract features and labels from a cleaned corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_featurize)

    p = sub.add_parser("split", help="split a featurized dataset into train/val/test")
    p.add_argument("--input", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--val", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--fractions", default="0.70,0.15,0.15")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("train", help="train one classifier on a training CSV")
    p.add_argument("--model", required=True, choices=MODEL_KINDS)
    p.add_argument("--train", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--params", help="hyperparameter overrides, e.g. criterion=entropy,max_depth=10")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--no-undersample", action="store_true",
                   help="skip balancing the training classes")
    p.add_argument("--timestamp", help="optional provenance timestamp recorded in the model file")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("grid", help="exhaustive hyperparameter search scored on a validation CSV")
    p.add_argument("--model", required=True, choices=MODEL_KINDS)
    p.add_argument("--train", required=True)
    p.add_argument("--val", required=True)
    p.add_argument("--grid", help="JSON file mapping parameter names to candidate lists")
    p.add_argument("--out", required=True, help="model file for the best cell refit on train")
    p.add_argument("--scores", required=True, help="score table CSV")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--no-undersample", action="store_true")
    p.add_argument("--timestamp")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("evaluate", help="evaluate a model file on a featurized CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("score", help="score one password with a model file")
    p.add_argument("--model", required=True)
    p.add_argument("--password", help="password to score; omit to read one line from stdin")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("serve", help="serve the scoring API over HTTP")
    p.add_argument("--model", required=True)
    p.add_argument("--bind", default="127.0.0.1:8787")
    p.add_argument("--cors-origin", help="origin allowed to call the API from a browser")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 130
    except Exception as e:
        print(f"pwlab {args.command}: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
