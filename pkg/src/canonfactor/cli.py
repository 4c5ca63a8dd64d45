"""Batch command line front end.

Deliberately import-light at module level: thread caps from
CANON_FACTOR_THREADS must land in the environment before numpy/BLAS
initialize, so all numeric imports happen inside the handlers.

Exit codes: 0 ok, 1 acceptance failures, 2 configuration problems,
3 domain errors from the modules, 4 convergence errors.  Failures print
a single machine-parsable line ``canonfactor: error kind=... detail=...``
on stderr.
"""

import argparse
import configparser
import os
import sys


class ConfigError(Exception):
    pass


def _apply_thread_env():
    raw = os.environ.get("CANON_FACTOR_THREADS", "").strip()
    if not raw:
        return
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"CANON_FACTOR_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ConfigError("CANON_FACTOR_THREADS must be >= 0")
    if n > 0:  # 0 = auto: leave BLAS defaults alone
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, str(n))


# -- argument plumbing --------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="canonfactor",
        description="Canonical systems: forward/inverse spectral problems, "
                    "wave transforms, and triangular factorization.")
    p.add_argument("--config", help="INI file; [common] plus per-command "
                                    "sections; flags override")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for property-test instance generation")
    sub = p.add_subparsers(dest="command", required=True)

    fw = sub.add_parser("forward", help="transfer matrices / density samples "
                                        "from a Hamiltonian file")
    fw.add_argument("--hamiltonian", required=True)
    fw.add_argument("--times", default="", help="comma list of t values")
    fw.add_argument("--z", default="", help="comma list of complex z")
    fw.add_argument("--density-grid", default="",
                    help="a:b:n real grid for boundary density samples")
    fw.add_argument("--eps", type=float, default=2.4,
                    help="Poisson ladder start for density extrapolation")
    fw.add_argument("--out", default="-", help="output file, - for stdout")

    wy = sub.add_parser("weyl", help="Weyl function values on a z grid")
    wy.add_argument("--hamiltonian", required=True)
    wy.add_argument("--z", required=True, help="comma list of complex z")
    wy.add_argument("--tol-weyl", type=float, default=1e-10)
    wy.add_argument("--out", default="-")

    sz = sub.add_parser("szego", help="K(mu, iy) table for a weight")
    sz.add_argument("--weight", required=True,
                    help="family spec like step:inner=2,half_width=1 or "
                         "constant:c=2, or @FILE / file:FILE")
    sz.add_argument("--y", default="1", help="comma list of heights y > 0")
    sz.add_argument("--out", default="-")

    a2 = sub.add_parser("a2", help="A2 characteristics of a half-line function")
    a2.add_argument("--function", required=True, help="#halfline v1 file")
    a2.add_argument("--tail", type=float, default=None,
                    help="constant tail if the file has none")
    a2.add_argument("--window", type=float, default=2.0)
    a2.add_argument("--out", default="-")

    dc = sub.add_parser("decompose", help="L1+L2 split of a half-line function")
    dc.add_argument("--function", required=True)
    dc.add_argument("--out-f1", required=True)
    dc.add_argument("--out-f2", required=True)
    dc.add_argument("--out", default="-")

    iv = sub.add_parser("invert", help="weight -> Hamiltonian file")
    iv.add_argument("--weight", required=True)
    iv.add_argument("--span", type=float, required=True, help="R: H lives on [0,R]")
    iv.add_argument("--cells", type=int, required=True)
    iv.add_argument("--truncate", type=float, default=None,
                    help="truncate the weight to [-j, j] first")
    iv.add_argument("--out-hamiltonian", required=True)
    iv.add_argument("--out", default="-")

    tr = sub.add_parser("transform", help="F_mu f samples and isometry residual")
    tr.add_argument("--hamiltonian", required=True)
    tr.add_argument("--function", required=True)
    tr.add_argument("--z", default="", help="comma list of complex z")
    tr.add_argument("--weight", default="",
                    help="weight for the isometry residual (optional)")
    tr.add_argument("--x-truncation", type=float, default=1e3)
    tr.add_argument("--out", default="-")

    fz = sub.add_parser("factorize", help="weight -> triangular factor + report")
    fz.add_argument("--weight", required=True)
    fz.add_argument("--window", type=float, required=True,
                    help="R: discretize on [0, R]")
    fz.add_argument("--cells", type=int, required=True)
    fz.add_argument("--out-factor", default="")
    fz.add_argument("--out-cholesky", default="")
    fz.add_argument("--out", default="-")

    vf = sub.add_parser("verify", help="run the acceptance suite")
    vf.add_argument("--only", default="", help="comma list of criterion numbers")
    vf.add_argument("--out", default="-")
    return p


def _merge_config(parser, argv):
    """Let an INI file supply defaults; explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    cp = configparser.ConfigParser()
    try:
        with open(known.config) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {known.config}: {exc}")
    except configparser.Error as exc:
        raise ConfigError(f"bad config {known.config}: {exc}")
    spa = next((a for a in parser._actions
                if isinstance(a, argparse._SubParsersAction)), None)
    # first bare token that names a subcommand (a flag value like the
    # config path itself can come earlier)
    command = next((a for a in argv if spa and a in spa.choices), None)
    defaults = {}
    for section in ("common", command or ""):
        if section and cp.has_section(section):
            for key, val in cp.items(section):
                defaults[key.replace("-", "_")] = val
    # push defaults for the invoked subcommand onto its own parser: that
    # both satisfies required options and lets argparse type-convert the
    # string values; leftovers go on the top-level parser
    child = spa.choices.get(command) if spa and command else None
    if child is not None:
        dests = {a.dest for a in child._actions}
        child_defaults = {k: v for k, v in defaults.items() if k in dests}
        child.set_defaults(**child_defaults)
        for a in child._actions:
            if a.required and a.dest in child_defaults:
                a.required = False
        defaults = {k: v for k, v in defaults.items() if k not in dests}
    parser.set_defaults(**defaults)
    # string defaults hit each action's type= during parsing, so the
    # config file never needs its own conversion table
    return parser.parse_args(argv)


def _parse_floats(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {text!r}: {exc}")


def _parse_complexes(text):
    try:
        return [complex(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad complex list {text!r}: {exc}")


def _resolve_weight(spec):
    from .measures import read_weight, weight_by_name
    if spec.startswith("@"):
        return read_weight(spec[1:])
    if spec.startswith("file:"):
        return read_weight(spec[5:])
    name, _, rest = spec.partition(":")
    params = {}
    for item in rest.split(","):
        if not item.strip():
            continue
        key, _, val = item.partition("=")
        if not _:
            raise ConfigError(f"weight parameter {item!r} is not key=value")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise ConfigError(f"weight parameter {item!r} is not numeric")
    try:
        return weight_by_name(name.strip(), **params)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"unknown weight spec {spec!r}: {exc}")


class _Out:
    """stdout or a file, with deterministic newline-joined writes."""

    def __init__(self, target):
        self.target = target
        self.lines = []

    def write(self, line):
        self.lines.append(line)

    def close(self):
        text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.target in ("-", ""):
            sys.stdout.write(text)
        else:
            with open(self.target, "w") as fh:
                fh.write(text)


def _fmt(x):
    return repr(float(x))


def _fmtc(z):
    z = complex(z)
    return f"{_fmt(z.real)} {_fmt(z.imag)}"


# -- handlers ------------------------------------------------------------------

def _cmd_forward(args, out):
    from .hamiltonian import read_hamiltonian
    from .solver import transfer_matrix
    ham = read_hamiltonian(args.hamiltonian)
    ts = _parse_floats(args.times)
    zs = _parse_complexes(args.z)
    if ts and zs:
        out.write("# t Re(z) Im(z) m00 m01 m10 m11 (Re Im each)")
        for t in ts:
            for z in zs:
                M = transfer_matrix(ham, t, z).m
                cells = " ".join(_fmtc(M[i, j]) for i in (0, 1) for j in (0, 1))
                out.write(f"{_fmt(t)} {_fmtc(z)} {cells}")
    if args.density_grid:
        from .weyl import spectral_density
        try:
            a, b, n = args.density_grid.split(":")
            a, b, n = float(a), float(b), int(n)
        except ValueError as exc:
            raise ConfigError(f"bad density grid {args.density_grid!r}: {exc}")
        import numpy as np
        xs = np.linspace(a, b, n)
        dens = spectral_density(ham, xs, eps=args.eps)
        out.write("# x density")
        for x, w in zip(xs, np.atleast_1d(dens)):
            out.write(f"{_fmt(x)} {_fmt(w)}")
    return 0


def _cmd_weyl(args, out):
    from .hamiltonian import read_hamiltonian
    from .weyl import weyl_sweep
    import numpy as np
    ham = read_hamiltonian(args.hamiltonian)
    zs = _parse_complexes(args.z)
    m, d = weyl_sweep(ham, np.array(zs), tol=args.tol_weyl)
    worst = float(np.max(d))
    if worst > args.tol_weyl:
        from .errors import ConvergenceError
        raise ConvergenceError(
            f"Weyl disk diameter {worst:.3e} above tol {args.tol_weyl:.1e}")
    out.write("# Re(z) Im(z) Re(m) Im(m) disk_diameter")
    for z, mv, dv in zip(zs, m, d):
        out.write(f"{_fmtc(z)} {_fmtc(mv)} {_fmt(dv)}")
    return 0


def _cmd_szego(args, out):
    from .weyl import szego_K
    mu = _resolve_weight(args.weight)
    ys = _parse_floats(args.y)
    out.write("# y K(mu, iy)")
    for y in ys:
        out.write(f"{_fmt(y)} {_fmt(szego_K(mu, 1j * y))}")
    return 0


def _cmd_a2(args, out):
    from .halfline import a2_classical, a2_ell1, read_halfline
    f = read_halfline(args.function, tail=args.tail)
    out.write(f"a2_classical={_fmt(a2_classical(f))}")
    out.write(f"a2_ell1={_fmt(a2_ell1(f, window=args.window))}")
    return 0


def _cmd_decompose(args, out):
    from .halfline import (decompose_L1_L2, norm_L1, norm_L1_plus_L2, norm_L2,
                           read_halfline, write_halfline)
    f = read_halfline(args.function)
    f1, f2 = decompose_L1_L2(f)
    write_halfline(f1, args.out_f1)
    write_halfline(f2, args.out_f2)
    out.write(f"norm_l1_plus_l2={_fmt(norm_L1_plus_L2(f))}")
    out.write(f"norm_l1_f1={_fmt(norm_L1(f1))}")
    out.write(f"norm_l2_f2={_fmt(norm_L2(f2))}")
    return 0


def _cmd_invert(args, out):
    from .accelerant import truncate_weight
    from .hamiltonian import write_hamiltonian
    from .inverse import inverse_spectral
    mu = _resolve_weight(args.weight)
    if args.truncate is not None:
        mu = truncate_weight(mu, args.truncate)
    ham, report = inverse_spectral(mu, args.span, args.cells, report=True)
    write_hamiltonian(ham, args.out_hamiltonian)
    out.write(f"cells={report.n_cells}")
    out.write(f"eta={_fmt(report.eta)}")
    out.write(f"cond={_fmt(report.cond)}")
    out.write(f"max_det_dev={_fmt(report.max_det_dev)}")
    out.write(f"ill_conditioned={report.ill_conditioned}")
    return 0


def _cmd_transform(args, out):
    from .halfline import read_halfline
    from .hamiltonian import read_hamiltonian
    from .transform import f_mu_apply, isometry_residual
    ham = read_hamiltonian(args.hamiltonian)
    f = read_halfline(args.function)
    zs = _parse_complexes(args.z)
    if zs:
        import numpy as np
        vals = f_mu_apply(ham, f, np.array(zs))
        out.write("# Re(z) Im(z) Re(Ff) Im(Ff)")
        for z, v in zip(zs, np.atleast_1d(vals)):
            out.write(f"{_fmtc(z)} {_fmtc(v)}")
    if args.weight:
        mu = _resolve_weight(args.weight)
        res = isometry_residual(ham, mu, f, X=args.x_truncation)
        out.write(f"isometry_residual={_fmt(res)}")
    return 0


def _cmd_factorize(args, out):
    from .factorize import (build_toeplitz, cholesky_oracle,
                            factor_via_transform, write_matrix)
    mu = _resolve_weight(args.weight)
    A, report = factor_via_transform(mu, args.window, args.cells)
    if args.out_factor:
        write_matrix(A, args.out_factor)
    if args.out_cholesky:
        wh = build_toeplitz(mu, args.cells, args.window / args.cells)
        write_matrix(cholesky_oracle(wh), args.out_cholesky)
    for line in str(report).splitlines():
        out.write(line)
    return 0


def _cmd_verify(args, out):
    from .acceptance import run_acceptance
    indices = None
    if args.only.strip():
        try:
            indices = [int(s) for s in args.only.split(",") if s.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad criterion list {args.only!r}: {exc}")
    results = run_acceptance(indices=indices, printer=out.write,
                             seed=args.seed)
    failed = [r.index for r in results if not r.passed]
    out.write(f"passed {len(results) - len(failed)}/{len(results)}")
    return 1 if failed else 0


_HANDLERS = {
    "forward": _cmd_forward,
    "weyl": _cmd_weyl,
    "szego": _cmd_szego,
    "a2": _cmd_a2,
    "decompose": _cmd_decompose,
    "invert": _cmd_invert,
    "transform": _cmd_transform,
    "factorize": _cmd_factorize,
    "verify": _cmd_verify,
}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        _apply_thread_env()
        parser = _build_parser()
        args = _merge_config(parser, argv)
    except ConfigError as exc:
        print(f"canonfactor: error kind=config detail={exc}", file=sys.stderr)
        return 2

    from .errors import ConvergenceError, DomainError
    out = _Out(getattr(args, "out", "-"))
    try:
        code = _HANDLERS[args.command](args, out)
    except ConfigError as exc:
        print(f"canonfactor: error kind=config detail={exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"canonfactor: error kind=config detail={exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"canonfactor: error kind=domain detail={exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"canonfactor: error kind=convergence detail={exc}",
              file=sys.stderr)
        return 4
    out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
