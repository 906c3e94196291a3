"""Command line front end.

Subcommands::

    reparam   bounded reparameterization of a network
    certify   check the parameter/norm inequalities (exit 3 on failure)
    norms     exact Lipschitz-type norm, optional Hölder/Sobolev estimates
    family    generate a member of a counterexample family
    report    divergence table of a family over several n

Exit status: 0 success, 1 usage error, 2 invalid input, 3 failed certificate.
Neuron indices in the output are 1-based.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .counterexamples import (
    SHRINKING_SLOPE,
    SPIKE,
    STAIRCASE,
    FamilySpec,
    divergence_report,
    report_csv,
    report_json,
)
from .errors import ReluParamError
from .io import dumps, net_to_dict, read_net, read_points
from .network import BoxDomain
from .norms import holder_norm_estimate, lipnorm, sobolev_slobodeckij_estimate
from .reparam import certify, reparameterize

EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CERT = 3

FAMILIES = {"shrinking-slope": SHRINKING_SLOPE, "staircase": STAIRCASE, "spike": SPIKE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="reluparam", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, net_input=True):
        if net_input:
            sp.add_argument("--input", required=True, help="network JSON file")
        sp.add_argument("--output", help="output file (default: stdout)")
        sp.add_argument("--a", type=float, default=0.0, help="lower box edge (default 0)")
        sp.add_argument("--b", type=float, default=1.0, help="upper box edge (default 1)")
        sp.add_argument("--d", type=int, help="input dimension (checked against the network)")
        sp.add_argument("--h", type=int, help="hidden width (checked against the network)")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("reparam", help="bounded reparameterization")
    common(sp)
    sp = sub.add_parser("certify", help="check the parameter/norm inequalities")
    common(sp)
    sp.add_argument("--A", default="box", help='"box" or a JSON file of reference points')
    sp = sub.add_parser("norms", help="norms of the realization")
    common(sp)
    sp.add_argument("--A", default="box", help='"box" or a JSON file of reference points')
    sp.add_argument("--gamma", type=float, help="Hölder/Sobolev exponent; enables estimates")
    sp.add_argument("--v", type=float, help="upper edge of the sup region (default b)")
    sp.add_argument("--p", type=float, help="Sobolev integrability exponent")
    sp.add_argument("--grid", type=int, default=101, help="grid points per axis")
    sp.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples")

    for name, helptext in (("family", "generate a family member"),
                           ("report", "divergence table over n")):
        sp = sub.add_parser(name, help=helptext)
        common(sp, net_input=False)
        sp.add_argument("--family", required=True, choices=sorted(FAMILIES))
        sp.add_argument("--gamma", type=float, default=0.5)
        sp.add_argument("--p", type=float, default=2.0)
        sp.add_argument("--q", type=float, help="spike steepness (default: automatic)")
        if name == "family":
            sp.add_argument("--n", type=int, required=True)
        else:
            sp.add_argument("--n-list", type=_int_list, required=True)
            sp.add_argument("--exponents", type=_float_list, required=True)
            sp.add_argument("--v", type=float)
            sp.add_argument("--grid", type=int)
            sp.add_argument("--samples", type=int, default=1_000_000)
    return p


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load(args):
    net = read_net(args.input)
    if args.d is not None and args.d != net.input_dim:
        raise ReluParamError(f"--d {args.d} does not match network input dimension {net.input_dim}")
    if args.h is not None and args.h != net.hidden_dim:
        raise ReluParamError(f"--h {args.h} does not match network width {net.hidden_dim}")
    box = BoxDomain(args.a, args.b, net.input_dim)
    A = getattr(args, "A", "box")
    if A != "box":
        box = box.with_points(read_points(A))
    return net, box


def _meta(args, box) -> dict:
    out = {"command": args.command, "a": box.a, "b": box.b, "d": box.d, "seed": args.seed}
    if hasattr(args, "A"):
        out["A"] = args.A
    return out


def _cmd_reparam(args) -> int:
    net, box = _load(args)
    res = reparameterize(net, box)
    doc = {"net": net_to_dict(res.net), "flat": net_to_dict(res.net, "flat"),
           "result": res.to_dict(base=1), "meta": _meta(args, box)}
    _emit(dumps(doc), args.output)
    return 0


def _cmd_certify(args) -> int:
    net, box = _load(args)
    cert = certify(net, box)
    _emit(dumps({"certificate": cert.to_dict(), "meta": _meta(args, box)}), args.output)
    return 0 if cert.passed else EXIT_CERT


def _cmd_norms(args) -> int:
    net, box = _load(args)
    rep = lipnorm(net, box)
    doc = {"norms": rep.to_dict(), "meta": _meta(args, box)}
    if args.gamma is not None:
        v = box.b if args.v is None else args.v
        doc["norms"]["holder"] = holder_norm_estimate(
            net, box, args.gamma, v, args.grid, seed=args.seed).to_dict()
        if args.p is not None:
            doc["norms"]["sobolev"] = sobolev_slobodeckij_estimate(
                net, box, args.gamma, args.p, args.samples, args.seed).to_dict()
    elif args.p is not None:
        raise UsageError("--p needs --gamma")
    _emit(dumps(doc), args.output)
    return 0


def _family_kw(args) -> dict:
    kind = FAMILIES[args.family]
    kw = {"d": args.d or 1, "h": args.h or 1, "a": args.a, "b": args.b}
    if kind == SPIKE:
        kw.update(gamma=args.gamma, p=args.p, q=args.q)
    return kw


def _cmd_family(args) -> int:
    kind = FAMILIES[args.family]
    spec = FamilySpec(kind, args.n, **_family_kw(args))
    net = spec.build()
    doc = {"net": net_to_dict(net), "flat": net_to_dict(net, "flat"),
           "family": spec.to_dict(), "meta": _meta(args, spec.box)}
    _emit(dumps(doc), args.output)
    return 0


def _cmd_report(args) -> int:
    kind = FAMILIES[args.family]
    kw = _family_kw(args)
    if kind != SPIKE:
        kw.update(gamma=args.gamma, p=args.p, q=None)
    rows = divergence_report(kind, args.n_list, args.exponents, v=args.v, grid_n=args.grid,
                             n_samples=args.samples, seed=args.seed, **kw)
    meta = {"family": kind, "n_list": args.n_list, "exponents": args.exponents,
            "samples": args.samples, "grid": args.grid, "v": args.v, **kw,
            "seed": args.seed}
    if args.output is None:
        sys.stdout.write(report_csv(rows))
        return 0
    stem = Path(args.output)
    if stem.suffix in (".csv", ".json"):
        stem = stem.with_suffix("")
    stem.with_suffix(".csv").write_text(report_csv(rows))
    stem.with_suffix(".json").write_text(report_json(rows, meta) + "\n")
    return 0


COMMANDS = {"reparam": _cmd_reparam, "certify": _cmd_certify, "norms": _cmd_norms,
            "family": _cmd_family, "report": _cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"reluparam: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReluParamError as exc:
        print(f"reluparam: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
