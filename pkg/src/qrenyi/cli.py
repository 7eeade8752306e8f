"""Command-line front end.

Exit status: 0 success, 1 input error, 2 optimizer non-convergence,
3 failed verification.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import channels as ch
from . import exponents as ex
from . import schur_weyl as sw
from .config import load_config, using, get_config
from .divergences import DivergenceVariant, d_alpha
from .errors import InputError, NonConvergence, QRenyiError
from .io import csv_text, format_number, operator_to_dict, read_channel, read_operator, write_channel
from .operators import distinct_eigenvalue_count, pinch, pinching_from

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED, EXIT_VERIFY = 0, 1, 2, 3

ROW_HEADER = ["command", "alpha", "R", "variant", "form", "value", "gap", "wall_time"]


@dataclass
class ResultRow:
    command: str
    alpha: float | None = None
    R: float | None = None
    variant: str = ""
    form: int | None = None
    value: float = math.nan
    gap: float = 0.0
    wall_time: float = 0.0

    def cells(self):
        def cell(v):
            return "" if v is None else v if isinstance(v, str) else format_number(v)
        return [cell(self.command), cell(self.alpha), cell(self.R), cell(self.variant),
                "" if self.form is None else str(self.form), cell(self.value), cell(self.gap),
                cell(self.wall_time)]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_alpha(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}") from None


def parse_range(text: str) -> list[float]:
    """'a:b:step' (inclusive of b) or a comma-separated list."""
    try:
        if ":" in text:
            a, b, step = (float(x) for x in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            count = int(math.floor((b - a) / step + 1e-9)) + 1
            return [round(a + i * step, 12) for i in range(count)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}; use a:b:step or a,b,c") from None


def parse_prior(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid prior {text!r}") from None


def _cq(args):
    spec = read_channel(args.channel)
    if spec.channel is None:
        raise InputError(f"{args.channel}: this command needs a classical-quantum channel ('inputs')")
    prior = getattr(args, "prior", None)
    P = np.array(prior) if prior is not None else spec.prior
    return spec.channel, P


def _emit_row(row: ResultRow, out):
    out.write(csv_text(ROW_HEADER, [row.cells()]))


# ---------------------------------------------------------------- commands

def cmd_divergence(args, out):
    rho, sigma = read_operator(args.rho), read_operator(args.sigma)
    t0 = time.perf_counter()
    value = d_alpha(rho, sigma, args.alpha, args.variant)
    _emit_row(ResultRow("divergence", args.alpha, None, args.variant, None, value, 0.0,
                        time.perf_counter() - t0), out)
    return EXIT_OK


def cmd_capacity(args, out):
    W, P = _cq(args)
    t0 = time.perf_counter()
    if args.prior is not None:
        res = ch.chi_alpha(W, P, args.alpha, args.variant, args.form, args.method)
        value, gap = res.value, res.gap
    else:
        res = ch.renyi_capacity(W, args.alpha, args.variant, args.form, args.method)
        value, gap = res.value, res.gap
    _emit_row(ResultRow("capacity", args.alpha, None, args.variant, args.form, value, gap,
                        time.perf_counter() - t0), out)
    return EXIT_OK


def cmd_radius(args, out):
    W, _ = _cq(args)
    t0 = time.perf_counter()
    res = ch.divergence_radius(W, args.alpha, args.variant)
    _emit_row(ResultRow("radius", args.alpha, None, args.variant, None, res.value, res.gap,
                        time.perf_counter() - t0), out)
    return EXIT_OK


def cmd_exponent(args, out):
    spec = read_channel(args.channel)
    t0 = time.perf_counter()
    if spec.kraus is not None and (spec.channel is None or args.kw_class):
        res = ex.kw_exponent(spec.kraus, args.rate, kw_class=args.kw_class)
        out.write(csv_text(["R", "lower", "upper", "sc", "alpha_star", "wall_time"],
                           [[args.rate, res.lower, res.upper, math.nan if res.sc is None else res.sc,
                             res.alpha_star, time.perf_counter() - t0]]))
        return EXIT_OK
    res = ex.hoeffding_capacity(spec.channel, args.rate, args.variant)
    out.write(csv_text(["R", "value", "alpha_star", "variant", "wall_time"],
                       [[args.rate, res.value, res.alpha_star, res.variant.value,
                         time.perf_counter() - t0]]))
    return EXIT_OK


def cmd_dueck_korner(args, out):
    W, P = _cq(args)
    t0 = time.perf_counter()
    res = ex.dueck_korner_F(W, P, args.rate)
    rows = [["F", res.value], ["conditional_divergence", res.conditional_divergence],
            ["holevo", res.holevo]]
    if args.check:
        rows.append(["flat_hoeffding", ex.flat_hoeffding_form2(W, P, args.rate).value])
    rows.append(["wall_time", time.perf_counter() - t0])
    out.write(csv_text(["quantity", "value"], rows))
    return EXIT_OK


def cmd_pinch(args, out):
    if args.channel is not None:
        W, _ = _cq(args)
        pinched = ch.pinched_product_channel(W, args.n)
        if args.output:
            write_channel(args.output, pinched)
        else:
            from .io import channel_to_dict
            out.write(json.dumps(channel_to_dict(pinched), indent=1) + "\n")
        return EXIT_OK
    if args.rho is None or args.sigma is None:
        raise InputError("pinch needs --rho and --sigma, or --channel and --n")
    rho, sigma = read_operator(args.rho), read_operator(args.sigma)
    E = pinching_from(sigma)
    data = operator_to_dict(pinch(E, rho))
    data["block_count"] = E.block_count
    text = json.dumps(data, indent=1) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_schur(args, out):
    dec = sw.isotypic_projections(args.n, args.d)
    vals = sw.universal_eigenvalues(args.n, args.d)
    rows = [[" ".join(str(r) for r in lam.rows), u, v, u * v, e]
            for lam, u, v, e in zip(dec.diagrams, dec.dims_U, dec.dims_V, vals)]
    out.write(csv_text(["diagram", "dim_U", "dim_V", "rank", "eigenvalue"], rows))
    sigma_u = sw.universal_symmetric_state(args.n, args.d)
    out.write(f"# distinct eigenvalues {distinct_eigenvalue_count(sigma_u)}, "
              f"v_nd {sw.v_nd(args.n, args.d)}\n")
    return EXIT_OK


def cmd_verify(args, out):
    from .verify import verify_suite
    report = verify_suite(args.seed, args.suite)
    out.write(report.summary() + "\n")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json() + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_sweep(args, out):
    if args.quantity == "exponent":
        if args.rates is None:
            raise InputError("sweep exponent needs --rates")
        W, _ = _cq(args)
        curve = ex.exponent_curve(W, args.rates, args.variant)
        out.write(curve.to_csv())
        return EXIT_OK
    if args.alphas is None:
        raise InputError(f"sweep {args.quantity} needs --alphas")
    rows = []
    if args.quantity == "divergence":
        if args.rho is None or args.sigma is None:
            raise InputError("sweep divergence needs --rho and --sigma")
        rho, sigma = read_operator(args.rho), read_operator(args.sigma)
        for a in args.alphas:
            rows.append([a, d_alpha(rho, sigma, a, args.variant)])
        out.write(csv_text(["alpha", "value"], rows))
        return EXIT_OK
    W, P = _cq(args)
    for a in args.alphas:
        if args.prior is not None:
            res = ch.chi_alpha(W, P, a, args.variant, args.form, args.method)
        else:
            res = ch.renyi_capacity(W, a, args.variant, args.form, args.method)
        rows.append([a, res.value, res.gap])
    out.write(csv_text(["alpha", "value", "gap"], rows))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _variant(text):
    try:
        return DivergenceVariant.parse(text).value
    except (ValueError, InputError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qrenyi", description="Quantum Renyi divergences, cq-channel capacities "
                                           "and strong converse exponents (natural logarithms).")
    p.add_argument("--config", help="JSON file overriding tolerances and caps")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def variant_arg(sp, default="sandwiched"):
        sp.add_argument("--variant", type=_variant, default=default,
                        help="petz, sandwiched or flat (default %(default)s)")

    def channel_args(sp, prior=True):
        sp.add_argument("--channel", required=True, help="channel JSON file")
        if prior:
            sp.add_argument("--prior", type=parse_prior, help="comma-separated input weights")

    s = sub.add_parser("divergence", help="D_alpha(rho||sigma)")
    s.add_argument("--rho", required=True)
    s.add_argument("--sigma", required=True)
    s.add_argument("--alpha", type=parse_alpha, required=True)
    variant_arg(s, "petz")
    s.set_defaults(func=cmd_divergence)

    s = sub.add_parser("capacity", help="Renyi capacity, or chi_alpha at --prior")
    channel_args(s)
    s.add_argument("--alpha", type=parse_alpha, required=True)
    s.add_argument("--form", type=int, choices=(1, 2), default=1)
    s.add_argument("--method", choices=("optimize", "sibson"), default="optimize")
    variant_arg(s)
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("radius", help="divergence radius with its duality gap")
    channel_args(s, prior=False)
    s.add_argument("--alpha", type=parse_alpha, required=True)
    variant_arg(s)
    s.set_defaults(func=cmd_radius)

    s = sub.add_parser("exponent", help="converse Hoeffding capacity / strong converse exponent")
    channel_args(s, prior=False)
    s.add_argument("--rate", type=float, required=True)
    s.add_argument("--kw-class", action="store_true",
                   help="assert the Kraus channel is covariant with additive minimum output entropy")
    variant_arg(s)
    s.set_defaults(func=cmd_exponent)

    s = sub.add_parser("dueck-korner", help="F(P, R, W)")
    channel_args(s)
    s.add_argument("--rate", type=float, required=True)
    s.add_argument("--check", action="store_true", help="also print the flat Hoeffding expression")
    s.set_defaults(func=cmd_dueck_korner)

    s = sub.add_parser("pinch", help="pinch rho by sigma, or write the pinched n-fold channel")
    s.add_argument("--rho")
    s.add_argument("--sigma")
    s.add_argument("--channel")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--output", help="write JSON here instead of stdout")
    s.set_defaults(func=cmd_pinch)

    s = sub.add_parser("schur", help="isotypic blocks and the universal symmetric state")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_schur)

    s = sub.add_parser("verify", help="run the invariant suite")
    s.add_argument("--suite", default="all", help="'all' or comma-separated group names")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", help="write the machine-readable report here")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="CSV sweeps over rates or alphas")
    s.add_argument("quantity", choices=("exponent", "capacity", "divergence"))
    s.add_argument("--channel")
    s.add_argument("--prior", type=parse_prior)
    s.add_argument("--rho")
    s.add_argument("--sigma")
    s.add_argument("--rates", type=parse_range)
    s.add_argument("--alphas", type=parse_range)
    s.add_argument("--form", type=int, choices=(1, 2), default=1)
    s.add_argument("--method", choices=("optimize", "sibson"), default="optimize")
    variant_arg(s)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = load_config(args.config) if args.config else get_config()
        if args.command == "sweep" and args.quantity != "divergence" and args.channel is None:
            raise InputError("sweep needs --channel")
        with using(config):
            return args.func(args, out)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except QRenyiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
