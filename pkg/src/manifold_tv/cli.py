"""Command line pipeline: synth, noise, denoise, metric, convert.

Stages exchange MVF files only. Exit codes: 0 success, 2 usage error,
3 data or format error, 4 numerical failure.
"""

import argparse
import csv
import json
import logging
import math
import sys

import numpy as np

from . import __version__
from .exceptions import (
    ConfigurationError,
    CutLocusError,
    DomainError,
    FormatError,
    InvariantError,
    NonConvergedError,
)
from .image import ManifoldImage
from .io import (
    lch_to_rgb,
    read_csv,
    read_mvf,
    read_ppm,
    rgb_to_lch,
    write_csv,
    write_glyph_json,
    write_mvf,
    write_ppm,
    write_ppm_rgb,
)
from .manifolds import S1, S2, SO3, LCh, LChManifold, Pos3
from .metrics import MetricReport, delta_snr, psnr_rgb
from .noise import (
    DEFAULT_A0,
    DEFAULT_B,
    DEFAULT_N_DIRECTIONS,
    DwiProtocol,
    dwi_noise_pipeline,
    fibonacci_directions,
    kappa_to_sigma,
    tangent_gaussian_noise,
    vmf_sample,
    wrapped_gaussian_noise,
)
from .phantoms import synth_pos3_image, synth_s2_image, synth_so3_series
from .prox import DATA_TERMS, DEFAULT_OMEGA, DEFAULT_TAU, REGULARIZERS
from .rng import RNG_VERSION
from .solvers import ALGORITHMS, DenoiseParams, LambdaSchedule, denoise, resolve_threads

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    """Flags are well formed but do not fit together."""


def _shape(text):
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; use n or n,m") from None
    if len(parts) not in (1, 2) or min(parts) < 2:
        raise argparse.ArgumentTypeError("shape needs 1 or 2 sizes, each at least 2")
    return parts


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _ext(path):
    return path.rsplit(".", 1)[-1].lower() if "." in path else ""


# -- subcommands ----------------------------------------------------------


def cmd_synth(args):
    shape = args.shape
    if args.phantom == "so3":
        if len(shape) == 2 and shape[1] != 1:
            raise UsageError("--shape for the so3 phantom is a length n")
        img = ManifoldImage(SO3(), synth_so3_series(shape[0]))
    else:
        if len(shape) != 2:
            raise UsageError(f"--shape for the {args.phantom} phantom needs n,m")
        if args.phantom == "dti":
            img = ManifoldImage(Pos3(), synth_pos3_image(*shape))
        else:
            img = ManifoldImage(S2(), synth_s2_image(*shape))
    write_mvf(img, args.output)
    return {"phantom": args.phantom, "shape": list(img.shape), "manifold": img.tag,
            "output": args.output}


def cmd_noise(args):
    img = read_mvf(args.input)
    M = img.manifold
    model = args.model
    info = {"model": model, "seed": args.seed, "rng": RNG_VERSION, "input": args.input}
    if model == "rician":
        if not isinstance(M, Pos3):
            raise UsageError("--model rician needs a pos3 image")
        sigma = _need(args.sigma, "--sigma")
        proto = DwiProtocol(fibonacci_directions(args.dirs), args.b, args.a0)
        out = dwi_noise_pipeline(img.data, sigma, args.seed, proto)
        info.update(sigma=sigma, b=args.b, a0=args.a0, dirs=args.dirs)
    elif model == "vmf":
        if not isinstance(M, S2):
            raise UsageError("--model vmf needs an s2 image")
        kappa = _need(args.kappa, "--kappa")
        out = vmf_sample(img.data, kappa, args.seed)
        info.update(kappa=kappa)
    elif model == "wrapped":
        if not isinstance(M, S1):
            raise UsageError("--model wrapped needs an s1 image")
        sigma = _need(args.sigma, "--sigma")
        out = wrapped_gaussian_noise(img.data, sigma, args.seed)
        info.update(sigma=sigma)
    else:
        if args.sigma is not None and args.kappa is not None:
            raise UsageError("give either --sigma or --kappa, not both")
        sigma = args.sigma if args.kappa is None else kappa_to_sigma(args.kappa)
        sigma = _need(sigma, "--sigma")
        out = tangent_gaussian_noise(M, img.data, sigma, args.seed)
        info.update(sigma=sigma)
    write_mvf(img.with_data(out), args.output)
    info["output"] = args.output
    return info


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this noise model")
    if value < 0:
        raise UsageError(f"{flag} must be nonnegative")
    return value


def cmd_denoise(args):
    init = read_mvf(args.input)
    data = read_mvf(args.data_image) if args.data_image else init
    if data.manifold != init.manifold or data.shape != init.shape:
        raise UsageError("-f and -i must hold images of the same manifold and shape")
    try:
        params = DenoiseParams(
            data_term=args.data_term, regularizer=args.reg, alpha=args.alpha,
            schedule=LambdaSchedule(args.lambda_c, args.lambda_omega),
            iterations=args.iters, algorithm=args.algo, tau=args.tau,
            huber_omega=args.huber_omega,
        )
        threads = resolve_threads(args.threads)
    except ValueError as err:
        raise UsageError(str(err)) from None
    rep = denoise(data.manifold, data.data, params,
                  x0=None if args.data_image is None else init.data, n_jobs=threads)
    write_mvf(init.with_data(rep.output), args.output)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "functional"])
            for r, v in rep.functional_trace:
                w.writerow([r, f"{v:.17g}"])
    return {
        "manifold": data.tag, "shape": list(data.shape), "data_term": params.data_term,
        "regularizer": params.regularizer, "alpha": params.alpha,
        "iterations": params.iterations, "algorithm": params.algorithm,
        "lambda_c": params.schedule.c, "lambda_omega": params.schedule.omega,
        "tau": params.tau, "huber_omega": params.huber_omega, "threads": threads,
        "final_functional": rep.functional_trace[-1][1], "mean_fallbacks": rep.mean_fallbacks,
        "input": args.input, "data": args.data_image or args.input, "output": args.output,
    }


def _read_rgb(path):
    if _ext(path) == "ppm":
        return read_ppm(path).astype(float) / 255.0
    img = read_mvf(path)
    if not isinstance(img.manifold, LChManifold):
        raise UsageError(f"{path}: psnr needs a PPM or an lch MVF image")
    return lch_to_rgb(img.data)


def cmd_metric(args):
    if args.kind == "dsnr":
        if not args.noisy:
            raise UsageError("-f is required for --kind dsnr")
        g, f, x = read_mvf(args.gt), read_mvf(args.noisy), read_mvf(args.result)
        if not (g.manifold == f.manifold == x.manifold):
            raise UsageError("-g, -f and -x must be on the same manifold")
        try:
            value = delta_snr(g.data, f.data, x.data, g.manifold)
        except ValueError as err:
            raise UsageError(str(err)) from None
        report = MetricReport("dsnr", value, int(math.prod(g.shape)))
    else:
        g, x = _read_rgb(args.gt), _read_rgb(args.result)
        report = MetricReport("psnr", psnr_rgb(g, x), int(math.prod(g.shape[:-1])))
    return {"metric": report}


def _read_any(path):
    ext = _ext(path)
    if ext == "csv":
        return read_csv(path)
    if ext == "ppm":
        rgb = read_ppm(path).astype(float) / 255.0
        return ManifoldImage(LCh(), rgb_to_lch(rgb))
    return read_mvf(path)


def cmd_convert(args):
    img = _read_any(args.input)
    ext = _ext(args.output)
    info = {"input": args.input, "output": args.output, "manifold": img.tag}
    if ext == "csv":
        write_csv(img, args.output)
    elif ext == "ppm":
        if isinstance(img.manifold, S1):
            write_ppm(img, args.output)
        elif isinstance(img.manifold, LChManifold) and len(img.shape) == 2:
            rgb, clipped = lch_to_rgb(img.data, return_clipped=True)
            write_ppm_rgb(rgb, args.output)
            info["out_of_gamut"] = clipped
        else:
            raise UsageError("PPM output needs an s1 (hue raster) or 2D lch image")
    elif ext == "json":
        try:
            write_glyph_json(img, args.output)
        except ValueError as err:
            raise UsageError(str(err)) from None
    elif ext == "mvf":
        write_mvf(img, args.output)
    else:
        raise UsageError(f"cannot infer output format from {args.output!r}")
    return info


# -- parser ---------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="manifold-tv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--json", action="store_true", help="print a JSON report on stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    # the same switches are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="write a phantom image")
    s.add_argument("--phantom", choices=("dti", "s2", "so3"), required=True)
    s.add_argument("--shape", type=_shape, required=True, help="n or n,m")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("noise", parents=[common], help="corrupt an image")
    s.add_argument("--model", choices=("rician", "vmf", "tangent", "wrapped"), required=True)
    s.add_argument("--sigma", type=float)
    s.add_argument("--kappa", type=float)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--b", type=float, default=DEFAULT_B)
    s.add_argument("--a0", type=float, default=DEFAULT_A0)
    s.add_argument("--dirs", type=int, default=DEFAULT_N_DIRECTIONS)
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_noise)

    s = sub.add_parser("denoise", parents=[common], help="run a proximal point solver")
    s.add_argument("-i", "--input", required=True,
                   help="initial iterate; also the data image unless -f is given")
    s.add_argument("-f", "--data-image", dest="data_image", help="data image f (defaults to -i)")
    s.add_argument("--data", dest="data_term", choices=DATA_TERMS, default="l2")
    s.add_argument("--reg", choices=REGULARIZERS, default="tv")
    s.add_argument("--alpha", type=float, default=0.1)
    s.add_argument("--iters", type=int, default=100)
    s.add_argument("--algo", choices=ALGORITHMS, default="cyclic")
    s.add_argument("--lambda-c", type=float, default=3.0)
    s.add_argument("--lambda-omega", type=float, default=0.95)
    s.add_argument("--tau", type=float, default=DEFAULT_TAU)
    s.add_argument("--huber-omega", type=float, default=DEFAULT_OMEGA)
    s.add_argument("--threads", type=int, help="worker threads (parallel algorithms)")
    s.add_argument("--trace", help="CSV file for the functional trace")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_denoise)

    s = sub.add_parser("metric", parents=[common], help="score a restoration")
    s.add_argument("--kind", choices=("dsnr", "psnr"), required=True)
    s.add_argument("-g", "--gt", required=True)
    s.add_argument("-f", "--noisy")
    s.add_argument("-x", "--result", required=True)
    s.set_defaults(func=cmd_metric)

    s = sub.add_parser("convert", parents=[common],
                       help="convert between MVF, CSV, PPM and glyph JSON")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_convert)
    return p


def _jsonable(v):
    if isinstance(v, MetricReport):
        return v.to_dict()
    if isinstance(v, float) and not math.isfinite(v):
        return "+inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(v, np.generic):
        return v.item()
    return v


def _print_report(command, info, as_json):
    if as_json:
        doc = {"command": command, **{k: _jsonable(v) for k, v in info.items()}}
        print(json.dumps(doc, sort_keys=True))
        return
    for k, v in info.items():
        if isinstance(v, MetricReport):
            print(f"{v.name}: {v.format()}")
        else:
            print(f"{k} = {v}")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        info = args.func(args)
    except (UsageError, ConfigurationError) as err:
        print(f"manifold-tv {args.command}: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (CutLocusError, NonConvergedError) as err:
        print(f"manifold-tv {args.command}: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FormatError, InvariantError, DomainError, OSError) as err:
        print(f"manifold-tv {args.command}: data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as err:
        print(f"manifold-tv {args.command}: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    _print_report(args.command, info, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
