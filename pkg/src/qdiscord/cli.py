"""Command-line driver: ``qdiscord {aligned,chain,lipkin,factorize}``.

Data go to ``--out`` (``-`` for stdout); progress and errors go to stderr.

Exit codes: 0 success, 2 configuration error, 3 unsupported model or
specification, 4 internal consistency failure.
"""

import argparse
import contextlib
import json
import logging
import sys

from .errors import ConfigError, ConsistencyError, DomainError, UnsupportedSpecError
from .sweep import FACTORIZE_COLUMNS, load_config, run_factorize, run_sweep, write_records

EXIT_OK, EXIT_CONFIG, EXIT_UNSUPPORTED, EXIT_CONSISTENCY = 0, 2, 3, 4

_MODEL = {"aligned": "aligned", "chain": "cyclic_nn", "lipkin": "fully_connected"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _sweep_args(p, chain):
    p.add_argument("--config", help="JSON config file; flags override its keys")
    p.add_argument("--grid", help="min:max:points (theta for aligned, B/Jx for chains)")
    p.add_argument("--measures", help="comma list from D,I1,I2,I3,C,Iq(q)")
    p.add_argument("--out", dest="output", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--workers", type=int, help="worker processes (default: $QDISCORD_WORKERS or 1)")
    if chain:
        p.add_argument("--n", type=int)
        p.add_argument("--chi", type=float, help="Jy/Jx")
        p.add_argument("--jx", type=float)
        p.add_argument("--solver")
        p.add_argument("--separations", help="'all' or comma list of L")


def build_parser():
    parser = _Parser(prog="qdiscord", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="no progress output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _sweep_args(sub.add_parser("aligned", help="theta sweep of the aligned mixture"), False)
    _sweep_args(sub.add_parser("chain", help="field sweep of the cyclic XY chain"), True)
    _sweep_args(sub.add_parser("lipkin", help="field sweep of the fully connected array"), True)
    f = sub.add_parser("factorize", help="uniform factorizing field and residuals")
    f.add_argument("--config")
    f.add_argument("--n", type=int)
    f.add_argument("--chi", type=float, help="(Jy - Jz)/(Jx - Jz); sets Jy")
    f.add_argument("--jx", type=float)
    f.add_argument("--jy", type=float)
    f.add_argument("--jz", type=float)
    f.add_argument("--s", type=float, help="spin magnitude")
    f.add_argument("--geometry", choices=("cyclic", "open", "fully_connected"))
    f.add_argument("--out", dest="output")
    f.add_argument("--format", choices=("csv", "json"))
    return parser


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _factorize(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    for key in ("n", "chi", "jx", "jy", "jz", "s", "geometry", "output", "format"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if "n" not in data:
        raise ConfigError("factorize needs --n")
    jx, jz = float(data.get("jx", 1.0)), float(data.get("jz", 0.0))
    if "chi" in data:
        jy = jz + float(data["chi"]) * (jx - jz)
    else:
        jy = float(data.get("jy", 0.5))
    report = run_factorize(int(data["n"]), jx, jy, jz, data.get("geometry", "cyclic"),
                           float(data.get("s", 0.5)))
    with _open_out(data.get("output", "-")) as fh:
        write_records([report], fh, data.get("format", "csv"), FACTORIZE_COLUMNS)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"qdiscord: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s", stream=sys.stderr)
    try:
        if args.command == "factorize":
            _factorize(args)
            return EXIT_OK
        overrides = {k: getattr(args, k, None) for k in
                     ("grid", "measures", "output", "format", "n", "chi", "jx", "solver",
                      "separations")}
        overrides["model"] = _MODEL[args.command]
        cfg = load_config(args.config, overrides)
        records = run_sweep(cfg, args.workers)
        with _open_out(cfg.output) as fh:
            write_records(records, fh, cfg.format)
    except ConfigError as exc:
        print(f"qdiscord: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (UnsupportedSpecError, DomainError) as exc:
        print(f"qdiscord: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ConsistencyError as exc:
        print(f"qdiscord: consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
