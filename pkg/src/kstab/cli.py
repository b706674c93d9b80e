"""kstab command line: lct | df | verify | corpus | identities.

Flags take precedence over KSTAB_* environment variables.  Exit codes:
0 all checks pass, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Iterable

from .harness import Cache, InputError, InstanceSpec, certify_cached, lct_report, q
from .identities import verify_lemma_positivity, verify_lemma_positivity2
from .toric import CORPORA, ToricFanoVariety, load_corpus

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _env(name: str, default=None):
    return os.environ.get(f"KSTAB_{name}", default)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=_env("INPUT"), help="instance or variety JSON file ('-' for stdin)")
    common.add_argument("--corpus", default=_env("CORPUS"), choices=CORPORA)
    common.add_argument("--r", default=_env("R"), help="order of the polarization: integer or 'auto'")
    common.add_argument("--kmax", type=int, default=_env("KMAX"), help="ceiling for weight sampling")
    common.add_argument("--seed", type=int, default=_env("SEED"))
    common.add_argument("--format", default=_env("FORMAT", "json"), choices=("json", "csv"))
    common.add_argument("--cache-dir", default=_env("CACHE_DIR"))
    common.add_argument("--oracle-mmax", type=int, default=_env("ORACLE_MMAX"))
    common.add_argument("--jobs", type=int, default=int(_env("JOBS", "1")))

    p = argparse.ArgumentParser(prog="kstab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("lct", parents=[common], help="global lct of a variety or a corpus")
    sub.add_parser("df", parents=[common], help="DF by both routes with an equality check")
    sub.add_parser("verify", parents=[common], help="full per-instance certificate")
    c = sub.add_parser("corpus", parents=[common], help="sweep a corpus")
    c.add_argument("--mode", choices=("lct", "random"), default=_env("MODE", "lct"))
    c.add_argument("--instances", type=int, default=int(_env("INSTANCES", "4")),
                   help="random flag ideals per variety in random mode")
    c.add_argument("--max-dim", type=int, default=2)
    i = sub.add_parser("identities", parents=[common], help="polynomial identities for a range of n")
    i.add_argument("--nmin", type=int, default=1)
    i.add_argument("--nmax", type=int, default=10)
    return p


# -- output -------------------------------------------------------------------

def _flatten(obj: Any, prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(_flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, list):
        for k, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}{k}."))
    else:
        out[prefix[:-1]] = obj
    return out


def _decimal(v: Any) -> Any:
    if isinstance(v, str) and "/" in v:
        try:
            return f"{float(Fraction(v)):.12g}"
        except (ValueError, ZeroDivisionError):
            return v
    return v


def emit(rows: list[dict], fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        payload = rows[0] if len(rows) == 1 else rows
        stream.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return
    flat = [_flatten(r) for r in rows]
    keys = sorted({k for f in flat for k in f})
    buf = io.StringIO()
    buf.write("# lossy: rationals rendered as decimals; use --format json for exact values\n")
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for f in flat:
        w.writerow({k: _decimal(f.get(k, "")) for k in keys})
    stream.write(buf.getvalue())


# -- inputs -------------------------------------------------------------------

def _read_input(path: str | None) -> Any:
    if not path:
        raise InputError("--input is required")
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
        return json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _spec(args, data: dict) -> InstanceSpec:
    data = dict(data)
    if args.r is not None:
        data["r"] = "auto" if args.r == "auto" else _int(args.r, "--r")
    if args.kmax is not None:
        data["kmax"] = int(args.kmax)
    if args.seed is not None:
        data["seed"] = int(args.seed)
    return InstanceSpec.from_json(data)


def _int(v, flag):
    try:
        return int(v)
    except ValueError as exc:
        raise InputError(f"{flag} expects an integer or 'auto'") from exc


def _varieties(args) -> list[ToricFanoVariety]:
    if args.corpus:
        return load_corpus(args.corpus)
    data = _read_input(args.input)
    spec = data if "variety" in data else {"variety": data}
    return [InstanceSpec.from_json(spec).variety()]


# -- commands -----------------------------------------------------------------

def cmd_lct(args) -> tuple[list[dict], bool]:
    rows = [lct_report(X, args.oracle_mmax) for X in _varieties(args)]
    return rows, all(r["passed"] for r in rows)


def cmd_df(args) -> tuple[list[dict], bool]:
    cert = certify_cached(_spec(args, _read_input(args.input)), Cache(args.cache_dir))
    df = cert["df"]
    equal = df["weight"]["DF"] == df["intersection"]["DF"]
    row = {"instance": cert["instance"], "weight": df["weight"], "intersection": df["intersection"],
           "equal": equal}
    return [row], equal


def cmd_verify(args) -> tuple[list[dict], bool]:
    cert = certify_cached(_spec(args, _read_input(args.input)), Cache(args.cache_dir), spot_check=True)
    return [cert], cert["passed"]


def _campaign_entry(payload: tuple[dict, str | None]) -> dict:
    raw, cache_dir = payload
    return certify_cached(InstanceSpec.from_json(raw), Cache(cache_dir))


def cmd_corpus(args) -> tuple[list[dict], bool]:
    if not args.corpus:
        raise InputError("--corpus is required")
    varieties = load_corpus(args.corpus)
    if args.mode == "lct":
        rows = [lct_report(X, args.oracle_mmax) for X in varieties]
        summary = {"summary": {"corpus": args.corpus, "count": len(rows),
                               "max_lct": q(max(Fraction(r["lct"]["value"]) for r in rows)),
                               "all_at_most_half": all(Fraction(r["lct"]["value"]) <= Fraction(1, 2)
                                                       for r in rows)}}
        return rows + [summary], all(r["passed"] for r in rows)
    seed0 = args.seed or 0
    specs = []
    for idx, X in enumerate(varieties):
        if X.n > args.max_dim:
            continue
        for t in range(args.instances):
            raw = {"variety": {"corpus": args.corpus, "index": idx}, "seed": seed0 + t,
                   "r": "auto" if args.r in (None, "auto") else _int(args.r, "--r")}
            if args.kmax is not None:
                raw["kmax"] = int(args.kmax)
            specs.append(raw)
    payloads = [(raw, args.cache_dir) for raw in specs]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            certs = list(pool.map(_campaign_entry, payloads))
    else:
        certs = [_campaign_entry(p) for p in payloads]
    rows = [{"variety": c["instance"]["variety"], "seed": c["instance"]["seed"], "r": c["instance"]["r"],
             "s": c["decomposition"]["s"], "DF": c["df"]["intersection"]["DF"],
             "epsilon": c["margin"]["epsilon"], "passed": c["passed"],
             "failed": [e["check"] for e in c["ledger"] if not e["passed"]]} for c in certs]
    summary = {"summary": {"corpus": args.corpus, "instances": len(rows),
                           "passed": sum(r["passed"] for r in rows)}}
    return rows + [summary], all(r["passed"] for r in rows)


def cmd_identities(args) -> tuple[list[dict], bool]:
    rows = []
    ok = True
    for n in range(args.nmin, args.nmax + 1):
        res = verify_lemma_positivity(n, seed=args.seed or 0)
        row = {"n": n, "positivity": res.to_json()}
        ok &= res.holds
        if n >= 2:
            base = verify_lemma_positivity2(n)
            row["expansion"] = base.holds
            ok &= base.holds
            basis = [verify_lemma_positivity2(n, s) for s in range(1, n + 1)]
            row["basis"] = [b.to_json() for b in basis]
            # T^n lies outside the span of the degree <= n-1 basis; reported, not counted
            ok &= all(b.holds for b in basis if b.s < n)
        rows.append(row)
    return rows, ok


COMMANDS = {"lct": cmd_lct, "df": cmd_df, "verify": cmd_verify, "corpus": cmd_corpus,
            "identities": cmd_identities}


def main(argv: Iterable[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        rows, ok = COMMANDS[args.cmd](args)
    except InputError as exc:
        print(f"kstab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (KeyError, ValueError) as exc:
        print(f"kstab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"kstab: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    emit(rows, args.format)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
