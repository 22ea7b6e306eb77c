"""Command line interface: ``vngap {search,certify,verify,suite,norm}``.

Exit codes: 0 success / violation certified, 1 suite failure, 2 input or
config error, 3 no violation, 4 numerical non-convergence.

Options may also come from a flat ``key = value`` config file given with
``--config``; a command-line flag beats the config file, which beats the
built-in default.
"""

import argparse
import configparser
import json
import os
import sys

import numpy as np

from . import serialization as ser
from .exceptions import CertificateError, NonConvergence, VonNeumannError
from .gap import (CertifiedVerdict, GapCertificate, N_SCHEDULE, certify, default_workers,
                  search_escalating)
from .linalg import op_norm
from .norms import CERTIFY_GRID, SEARCH_GRID, polydisk_sup, torus_sup
from .polynomial import MatrixPolynomial, linear_pencil
from .tuples import ContractionTuple, parrott_triple, pauli_pair
from .verify import SUITES, check_inequality

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_INPUT = 2
EXIT_NO_VIOLATION = 3
EXIT_NONCONVERGENCE = 4


class ConfigError(Exception):
    pass


def _positive_int(lo):
    def conv(value):
        v = int(value)
        if v < lo:
            raise ValueError(f"must be >= {lo}, got {v}")
        return v
    return conv


def _nonneg_float(value):
    v = float(value)
    if not v >= 0:
        raise ValueError(f"must be >= 0, got {value}")
    return v


# name -> (converter, default); None default means "no default / optional"
OPTIONS = {
    "n": (_positive_int(2), 2),
    "n_max": (_positive_int(2), N_SCHEDULE[-1]),
    "restarts": (_positive_int(1), 200),
    "budget": (_positive_int(1), None),
    "seed": (_positive_int(0), 0),
    "grid": (_positive_int(4), None),
    "fine_grid": (_positive_int(4), CERTIFY_GRID),
    "tol": (_nonneg_float, None),
    "b_pair": (str, "pauli"),
    "out": (str, None),
    "workers": (_positive_int(1), None),
    "trials": (_positive_int(1), 100),
    "suite": (str, "all"),
    "op": (str, "op-norm"),
    "poly": (str, None),
    "tuple": (str, None),
    "certificate": (str, None),
    "refine": (lambda v: str(v).lower() in ("1", "true", "yes", "on"), True),
}


def read_config(path):
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[vngap]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for key, value in parser["vngap"].items():
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise ConfigError(f"unknown config key {key!r}")
        out[key] = value
    return out


def resolve(args, names):
    """Merge flag > config > default and run each value through its converter."""
    config = read_config(args.config) if args.config else {}
    settings = {}
    for name in names:
        conv, default = OPTIONS[name]
        raw = getattr(args, name, None)
        if raw is None:
            raw = config.get(name)
        if raw is None:
            settings[name] = default
            continue
        try:
            settings[name] = conv(raw)
        except ValueError as exc:
            raise ConfigError(f"--{name.replace('_', '-')}: {exc}") from exc
    return settings


def _color(text, code):
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _load_json(path):
    try:
        return ser.load(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def load_b_pair(source):
    if source == "pauli":
        return pauli_pair()
    data = _load_json(source)
    try:
        b1, b2 = ser.matrix_from_json(data["b1"]), ser.matrix_from_json(data["b2"])
        parrott_triple(b1, b2)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad b-pair file {source}: {exc}") from exc
    return b1, b2


def load_certificate(path):
    data = _load_json(path)
    try:
        return GapCertificate.from_dict(data)
    except (CertificateError, AttributeError) as exc:
        raise ConfigError(str(exc)) from exc


def _print_verdict(v: CertifiedVerdict):
    verdict = _color(v.verdict, "32" if v.violation else "33")
    print(f"lhs_lower={v.lhs_lower!r}")
    print(f"rhs_certified_upper={v.certified_upper!r}")
    print(f"ratio_lower={v.ratio_lower!r}")
    print(f"verdict={verdict}")


def cmd_search(args):
    s = resolve(args, ["n", "n_max", "restarts", "budget", "seed", "grid", "fine_grid", "b_pair",
                       "out", "workers"])
    if s["n_max"] < s["n"]:
        raise ConfigError("--n-max must be >= --n")
    b_pair = load_b_pair(s["b_pair"])
    cert = search_escalating(
        range(s["n"], s["n_max"] + 1), b_pair, s["restarts"], s["seed"], s["budget"],
        grid=s["grid"] or SEARCH_GRID, fine_grid=s["fine_grid"],
        workers=s["workers"] or default_workers())
    out = s["out"] or "gap_certificate.json"
    ser.dump(cert.to_dict(), out)
    status = _color("VIOLATION", "32") if cert.violation else _color("NO_VIOLATION", "33")
    print(f"n={cert.n} ratio_lower={cert.ratio_lower!r} {status} "
          f"wall_time={cert.timing['wall_time_s']:.1f}s seed={cert.seed} out={out}")
    return EXIT_OK if cert.violation else EXIT_NO_VIOLATION


def cmd_certify(args):
    s = resolve(args, ["fine_grid"])
    cert = load_certificate(args.path)
    try:
        verdict = certify(cert, s["fine_grid"])
    except CertificateError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"seed={cert.seed} n={cert.n} fine_grid={s['fine_grid']}")
    _print_verdict(verdict)
    return EXIT_OK if verdict.violation else EXIT_NO_VIOLATION


def cmd_verify(args):
    s = resolve(args, ["poly", "tuple", "certificate", "tol", "grid", "out"])
    if s["certificate"]:
        cert = load_certificate(s["certificate"])
        p = linear_pencil([cert.a1, cert.a2, cert.a3])
        t = parrott_triple(cert.b1, cert.b2)
    elif s["poly"] and s["tuple"]:
        try:
            p = MatrixPolynomial.from_dict(_load_json(s["poly"]))
            t = ContractionTuple.from_dict(_load_json(s["tuple"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad input: {exc}") from exc
    else:
        raise ConfigError("verify needs --certificate or both --poly and --tuple")
    try:
        report = check_inequality(p, t, 1e-8 if s["tol"] is None else s["tol"], s["grid"])
    except (ValueError, VonNeumannError) as exc:
        if isinstance(exc, NonConvergence):
            raise
        raise ConfigError(str(exc)) from exc
    if s["out"]:
        ser.dump(report.to_dict(), s["out"])
    print(f"lhs={report.lhs!r}")
    print(f"rhs={report.rhs!r}")
    print(f"ratio={report.ratio!r}")
    print(f"holds={str(report.holds).lower()}")
    print(f"digest={report.digest}")
    return EXIT_OK


def cmd_suite(args):
    s = resolve(args, ["trials", "seed", "tol", "suite", "out"])
    names = list(SUITES) if s["suite"] == "all" else [s["suite"]]
    if any(name not in SUITES for name in names):
        raise ConfigError(f"unknown suite {s['suite']!r}")
    reports = []
    for name in names:
        kwargs = {} if s["tol"] is None else {"tol": s["tol"]}
        report = SUITES[name](s["trials"], s["seed"], **kwargs)
        reports.append(report)
        print(report.summary())
    if s["out"]:
        ser.dump([r.to_dict() for r in reports], s["out"])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_SUITE_FAILED


def cmd_norm(args):
    s = resolve(args, ["op", "grid", "refine"])
    data = _load_json(args.path)
    try:
        if s["op"] == "op-norm":
            m = ser.matrix_from_json(data["matrix"])
            print(f"op_norm={op_norm(m)!r}")
            return EXIT_OK
        if s["op"] not in ("torus-sup", "polydisk-sup"):
            raise ConfigError(f"unknown --op {s['op']!r}")
        p = MatrixPolynomial.from_dict(data)
        fn = torus_sup if s["op"] == "torus-sup" else polydisk_sup
        res = fn(p, s["grid"] or SEARCH_GRID, s["refine"])
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad input: {exc}") from exc
    print(f"{s['op']}={res.best_value!r}")
    print(f"certified_upper={res.certified_upper!r}")
    print(f"best_point={list(res.best_point.angles)}")
    print(f"grid_points_per_dim={res.grid_points_per_dim} lipschitz_bound={res.lipschitz_bound!r}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="vngap", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--seed", default=None)
    common.add_argument("--grid", default=None, help="torus grid points per angle")
    common.add_argument("--fine-grid", dest="fine_grid", default=None,
                        help="grid points per angle for certification")
    common.add_argument("--tol", default=None)
    common.add_argument("--out", default=None, help="JSON output path")
    common.add_argument("--workers", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", parents=[common], help="search for a certified violation")
    p.add_argument("--n", default=None, help="first coefficient size (>= 2)")
    p.add_argument("--n-max", dest="n_max", default=None, help="last coefficient size to try")
    p.add_argument("--restarts", default=None)
    p.add_argument("--budget", default=None, help="objective evaluations per n")
    p.add_argument("--b-pair", dest="b_pair", default=None, help='"pauli" or a JSON file with b1, b2')
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("certify", parents=[common], help="re-verify a certificate")
    p.add_argument("path")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="check the inequality for (P, T)")
    p.add_argument("--poly", default=None)
    p.add_argument("--tuple", default=None)
    p.add_argument("--certificate", default=None, help="use the pencil and triple of a certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("suite", parents=[common], help="run the property suites")
    p.add_argument("--trials", default=None)
    p.add_argument("--suite", default=None, choices=["all", *SUITES])
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("norm", parents=[common], help="operator norm or torus sup of a JSON input")
    p.add_argument("path")
    p.add_argument("--op", default=None, choices=["op-norm", "torus-sup", "polydisk-sup"])
    p.add_argument("--no-refine", dest="refine", action="store_const", const="false", default=None)
    p.set_defaults(func=cmd_norm)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
