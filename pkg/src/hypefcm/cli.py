"""
Command-line benchmark harness.

    hypefcm run      --dataset builtin:iris --method fcm --repeats 15
    hypefcm grid     --dataset builtin:iris --alphas 0.1,0.5,1 --ks 5,10
    hypefcm ablation --dataset data.csv --label-column -1 --ks 1,5,10

Exit status is 0 on success. Any failure writes one JSON line
``{"error": <kind>, "message": <text>}`` to stderr and exits 2 (usage) or
1 (data or runtime).
"""

import argparse
import json
import sys

from . import __version__
from .core import FILTRATION_MODES
from .exceptions import DataError, HypeFCMError, UsageError
from .experiments import METHODS, ExperimentSpec, cmd_ablation, cmd_grid, cmd_run, write_record


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(p):
    p.add_argument("--dataset", required=True, help="CSV path or builtin:NAME (iris, blobs, smile, rings)")
    p.add_argument("--method", choices=METHODS, default="hypefcm")
    p.add_argument("--clusters", type=int, default=None, help="default: number of label classes")
    p.add_argument("--alpha", type=float, default=1.0, help="curvature (default 1)")
    p.add_argument("--k-filter", type=int, default=10, dest="k")
    p.add_argument("--filtration-mode", choices=FILTRATION_MODES, default="per_centroid",
                   dest="filtration")
    p.add_argument("--fuzziness", type=float, default=2.0, dest="m")
    p.add_argument("--max-iters", type=int, default=300, dest="max_iter")
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0, help="base seed; repeat r uses seed + r")
    p.add_argument("--repeats", type=int, default=15)
    p.add_argument("--margin", type=float, default=0.9)
    p.add_argument("--zscore", action="store_true", help="standardise features before clustering")
    p.add_argument("--fit-to-ball", action="store_true",
                   help="scale data to fill the ball at every curvature")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="write the result record here")
    p.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    p.add_argument("--no-timing", action="store_true",
                   help="omit wall-clock fields so repeated runs give identical files")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--header", action="store_true", help="CSV has a header row")
    p.add_argument("--label-column", type=int, default=None)


def build_parser():
    parser = _Parser(prog="hypefcm", description="Hyperbolic fuzzy c-means benchmark harness.")
    parser.add_argument("--version", action="version", version=f"hypefcm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("run", help="seeded repeats of one configuration"))
    g = sub.add_parser("grid", help="(alpha, k) grid search")
    _common(g)
    g.add_argument("--alphas", type=_float_list, default=None,
                   help="default: 0.1..1 step 0.1 then 100..1000 step 100")
    g.add_argument("--ks", type=_int_list, default=None, help="default: 1..15")
    a = sub.add_parser("ablation", help="filtration on/off, paired seeds, per k")
    _common(a)
    a.add_argument("--ks", type=_int_list, default=None, help="default: 1..15")
    return parser


def _spec(args):
    return ExperimentSpec(
        dataset=args.dataset, method=args.method, clusters=args.clusters, alpha=args.alpha,
        k=args.k, filtration=args.filtration, m=args.m, max_iter=args.max_iter, tol=args.tol,
        seed=args.seed, repeats=args.repeats, margin=args.margin, zscore=args.zscore,
        fit_to_ball=args.fit_to_ball, jobs=args.jobs, timing=not args.no_timing,
        delimiter=args.delimiter, header=args.header, label_column=args.label_column,
    )


def _summary(rec):
    fmt = "ari {ari_mean:.4f} +/- {ari_std:.4f}  nmi {nmi_mean:.4f} +/- {nmi_std:.4f}"
    if rec["command"] == "run":
        return [f"{rec['config']['method']} on {rec['dataset']['name']}: " + fmt.format(**rec["aggregate"])]
    if rec["command"] == "grid":
        lines = [f"alpha {r['alpha']:g}  k {r['k']}  " + fmt.format(**r) for r in rec["cells"]]
        best = max(rec["cells"], key=lambda r: r["nmi_mean"])
        lines.append(f"best by nmi: alpha {best['alpha']:g}  k {best['k']}")
        return lines
    return [f"k {r['k']}  {r['arm']:<10}  " + fmt.format(**r) for r in rec["rows"]]


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        spec = _spec(args)
        if args.command == "run":
            rec = cmd_run(spec)
        elif args.command == "grid":
            rec = cmd_grid(spec, args.alphas, args.ks)
        else:
            rec = cmd_ablation(spec, args.ks)
        if args.out:
            write_record(rec, args.out, args.fmt)
    except UsageError as exc:
        return _fail("usage", exc, 2)
    except (DataError, HypeFCMError) as exc:
        return _fail("data", exc, 1)
    except OSError as exc:
        return _fail("io", exc, 1)
    except Exception as exc:  # noqa: BLE001 - last-resort single-line report
        return _fail("internal", f"{type(exc).__name__}: {exc}", 1)
    for line in _summary(rec):
        print(line)
    return 0


def _fail(kind, exc, code):
    msg = " ".join(str(exc).split())
    print(json.dumps({"error": kind, "message": msg}), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
