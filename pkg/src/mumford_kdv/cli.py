"""Command-line driver.

    mumford-kdv tau -g 3 --format json
    mumford-kdv solve -g 2 --eval a1=1,a2=0 --route both
    mumford-kdv verify --all -g 2 --seed 7

Exit status: 0 when every requested check passes, 1 on a failed check or an
evaluation error (for instance a point on the theta divisor), 2 on a usage
error.  The default output format can be set with ``MUMFORD_KDV_FORMAT``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .chi import chi, chi_table
from .exact import MPoly, PoleError, RatFun, dumps, to_json
from .jacobian import (INFINITY, AVector, DivisorPoints, abel_jacobi, h0_nonzero,
                       in_aj_image, tau, theta_contains)
from .kdv import (kdv_residue, lax_jet, log_second_derivative, wronskian_sign,
                  wronskian_tau)
from .phase import MumfordTriple, embed, momentum, on_zero_fiber, stratum, vector_field_at
from .solver import ThetaDivisorError, eval_at, rho, solution, uvw_scheme
from .verify import DEFAULT_SEED, TOPICS, Check, _check_eq

FORMAT_ENV = "MUMFORD_KDV_FORMAT"


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: dict
    results: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    error: dict | None = None
    format: str | None = None

    def add(self, name: str, value) -> None:
        self.results.append((name, value))

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def ok(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        if self.error and self.error.get("kind") == "usage":
            return 2
        return 0 if self.ok else 1

    def to_json(self) -> dict:
        out = {"command": self.command,
               "results": [{"name": n, "value": to_json(v)} for n, v in self.results],
               "checks": [c.to_json() for c in self.checks]}
        if self.error is not None:
            out["error"] = self.error
        return out

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return dumps(self.to_json())
        lines = []
        for name, value in self.results:
            text = _text(value)
            if "\n" in text:
                lines.append(f"{name}:")
                lines.extend("  " + t for t in text.splitlines())
            else:
                lines.append(f"{name} = {text}")
        for c in self.checks:
            lines.append(f"[{c.status}] {c.name}")
            if not c.passed and c.residue is not None:
                lines.append(f"  residue: {dumps(c.to_json()['residue'])}")
        if self.error is not None:
            lines.append(f"error: {self.error['message']}")
        return "\n".join(lines)


def _text(value) -> str:
    if isinstance(value, (MPoly, RatFun, MumfordTriple)):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, bool) or isinstance(value, int) or isinstance(value, str):
        return str(value).lower() if isinstance(value, bool) else str(value)
    return dumps(value)


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "usage error")
        if message:
            sys.stdout.write(message)
        raise SystemExit(status)


def _genus(text: str) -> int:
    g = int(text)
    if g < 1:
        raise argparse.ArgumentTypeError("genus must be at least 1")
    return g


def _rat(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact rational: {text!r}") from None


def parse_point(text: str, g: int) -> AVector:
    """``a1=1/2,a2=0``; missing coordinates are 0."""
    coords = [Fraction(0)] * g
    seen = set()
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, val = part.partition("=")
        name = name.strip()
        if not sep or not name.startswith("a") or not name[1:].isdigit():
            raise UsageError(f"bad coordinate {part!r}; expected a<i>=<p/q>")
        i = int(name[1:])
        if not 1 <= i <= g:
            raise UsageError(f"coordinate {name} outside a1..a{g}")
        if i in seen:
            raise UsageError(f"coordinate {name} given twice")
        seen.add(i)
        coords[i - 1] = _rat(val)
    return AVector(g, tuple(coords))


def parse_flows(text: str) -> list:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        lo, sep, hi = part.partition("..")
        try:
            rng = range(int(lo), int(hi) + 1) if sep else [int(lo)]
        except ValueError:
            raise UsageError(f"bad flow range {part!r}") from None
        out.extend(rng)
    if not out or min(out) < 1:
        raise UsageError("flow indices must be positive")
    return sorted(set(out))


def _coeff_list(text: str, length: int, name: str) -> tuple:
    vals = [_rat(c) for c in text.split(",")] if text.strip() else []
    if len(vals) == length - 1:
        vals.append(Fraction(1))
    if len(vals) != length:
        raise UsageError(f"{name} needs {length - 1} or {length} coefficients (lowest degree first)")
    return tuple(vals)


def build_parser() -> _Parser:
    # the subcommand copy must not overwrite a value given before the subcommand
    top = _Parser(add_help=False)
    top.add_argument("--format", choices=("text", "json"), default=None)
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    gen = _Parser(add_help=False)
    gen.add_argument("-g", "--genus", type=_genus, required=True)

    p = _Parser(prog="mumford-kdv", parents=[top],
                description="Rational solutions of the Mumford system on y^2 = x^(2g+1).")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("chi", parents=[fmt, gen], help="coefficients of exp(sum a_i t^(2i-1))")
    s.add_argument("-n", type=int, help="a single index n (default: the table up to 2g)")
    s.add_argument("--upto", type=int)

    sub.add_parser("tau", parents=[fmt, gen], help="tau_g")
    sub.add_parser("rho", parents=[fmt, gen], help="rho_g = d^2/da1^2 log tau_g")

    s = sub.add_parser("solve", parents=[fmt, gen], help="the solution family, optionally at a point")
    s.add_argument("--eval", dest="point")
    s.add_argument("--route", choices=("p", "rho", "both"), default="p")
    s.add_argument("--scheme", action="store_true", help="also print the U/V/W polynomials")

    s = sub.add_parser("aj", parents=[fmt, gen], help="Abel-Jacobi image of points alpha_k")
    s.add_argument("--alphas", required=True, help="comma list of nonzero rationals or 'inf'")

    s = sub.add_parser("theta", parents=[fmt, gen], help="theta membership and rank criteria")
    s.add_argument("--at", dest="point", required=True)
    s.add_argument("-k", type=int, help="twist for h0/image queries (default: all 0..2g-1)")

    s = sub.add_parser("strata", parents=[fmt, gen], help="stratum of a point of the zero fiber")
    s.add_argument("--u", default=None)
    s.add_argument("--v", default=None)
    s.add_argument("--w", default=None)
    s.add_argument("--eval", dest="point", help="take the solution point at this a instead")
    s.add_argument("--embed", type=int, default=0, help="embed the point this many times first")

    s = sub.add_parser("kdv", parents=[fmt, gen], help="KdV flows for f = 2 rho_g")
    s.add_argument("--flows", default=None, help="e.g. 1..3 (default 1..g+1)")
    s.add_argument("--depth", type=int, default=None)

    sub.add_parser("wronskian", parents=[fmt, gen], help="Wronskian tau function")

    s = sub.add_parser("verify", parents=[fmt], help="run invariant checks")
    s.add_argument("topic", nargs="?", choices=sorted(TOPICS) + ["golden"])
    s.add_argument("--all", action="store_true")
    s.add_argument("-g", "--genus", type=_genus, default=None)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--full", action="store_true", help="symbolic Jacobi check at every genus")
    s.add_argument("--dir", default=None, help="golden directory (default: the packaged one)")
    return p


# ---------------------------------------------------------------------------
# commands


def _cmd_chi(args, rep):
    g = args.genus
    if args.n is not None:
        rep.add(f"chi_{args.n}", chi(args.n, g))
        return
    N = args.upto if args.upto is not None else 2 * g
    if N < 0:
        raise UsageError("--upto must be non-negative")
    for n, c in enumerate(chi_table(N, g).entries):
        rep.add(f"chi_{n}", c)


def _cmd_tau(args, rep):
    rep.add(f"tau_{args.genus}", tau(args.genus))


def _cmd_rho(args, rep):
    rep.add(f"rho_{args.genus}", rho(args.genus).value)


def _theta_error(exc: PoleError, g: int) -> dict:
    theta = isinstance(exc, ThetaDivisorError)
    point = {k: f"{v.numerator}/{v.denominator}" for k, v in exc.point.items()}
    msg = (f"tau_{g} vanishes at the evaluation point (theta divisor)" if theta
           else "a denominator vanishes at the evaluation point")
    return {"kind": "theta-divisor" if theta else "pole", "message": msg,
            "denominator": to_json(exc.denominator), "point": point}


def _cmd_solve(args, rep):
    g = args.genus
    routes = ("p", "rho") if args.route == "both" else (args.route,)
    a = parse_point(args.point, g) if args.point is not None else None
    if args.scheme:
        S = uvw_scheme(g)
        rep.add("U", list(reversed(S.U)))
        rep.add("V", list(reversed(S.V)))
        rep.add("W", list(reversed(S.W)))
    values = {}
    for r in routes:
        fam = solution(g, r)
        if a is not None:
            try:
                fam = eval_at(fam, a)
            except PoleError as exc:
                rep.error = _theta_error(exc, g)
                return
        values[r] = fam
        rep.add(f"solution[route={r}]", fam)
        h = momentum(fam)
        rep.extend([Check(f"spectral-identity[route={r}]", h.is_zero_fiber(),
                          None if h.is_zero_fiber() else list(h.coeffs))])
    if len(values) == 2:
        F, R = values["p"], values["rho"]
        rep.extend([Check("route-equivalence", F == R, None if F == R else {"p": F, "rho": R})])


def _cmd_aj(args, rep):
    g = args.genus
    alphas = []
    for part in args.alphas.split(","):
        part = part.strip()
        alphas.append(INFINITY if part.lower() in ("inf", "infinity") else _rat(part))
    try:
        D = DivisorPoints(tuple(alphas))
        a = abel_jacobi(g, D)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.add("a", list(a.coords))
    rep.add("theta", theta_contains(a))


def _cmd_theta(args, rep):
    g = args.genus
    a = parse_point(args.point, g)
    rep.add("tau", tau(g).evaluate(a.as_point()))
    rep.add("theta", theta_contains(a))
    ks = [args.k] if args.k is not None else range(2 * g)
    for k in ks:
        if not 0 <= k <= 2 * g - 1:
            raise UsageError(f"k must lie in 0..{2 * g - 1}")
        rep.add(f"h0_nonzero[k={k}]", h0_nonzero(k, a))
        rep.add(f"in_aj_image[k={k}]", in_aj_image(k, a))


def _cmd_strata(args, rep):
    g = args.genus
    base = g - args.embed
    if args.embed < 0 or base < 0:
        raise UsageError("--embed must lie in 0..g")
    if args.point is not None:
        if base < 1:
            raise UsageError("--eval needs a positive source genus")
        try:
            l = eval_at(solution(base, "p"), parse_point(args.point, base))
        except PoleError as exc:
            rep.error = _theta_error(exc, base)
            return
    else:
        if args.u is None or args.w is None:
            raise UsageError("give --u, --v, --w coefficient lists or --eval")
        v = [_rat(c) for c in (args.v or "").split(",") if c.strip()]
        if len(v) > base:
            raise UsageError(f"v has at most {base} coefficients")
        l = MumfordTriple(base, _coeff_list(args.u, base + 1, "u"), tuple(v),
                          _coeff_list(args.w, base + 2, "w"))
    for _ in range(args.embed):
        l = embed(l)
    rep.add("point", l)
    if not on_zero_fiber(l):
        rep.error = {"kind": "not-on-zero-fiber", "message": "u w + v^2 is not x^(2g+1)",
                     "momentum": to_json(list(momentum(l).coeffs))}
        return
    k = stratum(l)
    rep.add("stratum", k)
    rep.add("regular", k == g)
    if k < g:
        vf = {c: v for c, v in vector_field_at(g, l).items() if v}
        rep.extend([Check(f"top-vector-field-vanishes[g={g}]", not vf, vf or None)])


def _cmd_kdv(args, rep):
    g = args.genus
    flows = parse_flows(args.flows) if args.flows else list(range(1, g + 2))
    for i in flows:
        if args.depth is not None and args.depth < 2 * i - 2:
            raise UsageError(f"--depth must be at least {2 * i - 2} for flow {i}")
        rep.add(f"lax_rhs[i={i}]", lax_jet(i, args.depth))
        r = kdv_residue(g, i, args.depth)
        rep.extend([Check(f"kdv.flow[g={g},i={i}]", r.is_zero(), None if r.is_zero() else r)])


def _cmd_wronskian(args, rep):
    g = args.genus
    W = wronskian_tau(g)
    rep.add(f"wronskian_{g}", W)
    rep.add("sign", wronskian_sign(g))
    rep.extend([_check_eq(f"wronskian-signed-tau[g={g}]", W, tau(g) * wronskian_sign(g)),
                _check_eq(f"wronskian-log-derivative[g={g}]",
                          log_second_derivative(W), log_second_derivative(tau(g)))])


def _cmd_verify(args, rep):
    if not args.all and args.topic is None:
        raise UsageError("give a topic or --all")
    topics = sorted(TOPICS) + ["golden"] if args.all else [args.topic]
    if any(t != "golden" for t in topics) and args.genus is None:
        raise UsageError("-g is required for this topic")
    for t in topics:
        if t == "golden":
            rep.extend(golden_suite(args.dir).checks)
            continue
        kw = {"seed": args.seed}
        if args.samples is not None:
            kw["samples"] = args.samples
        if t == "poisson" and args.full:
            kw["full"] = True
        rep.extend(TOPICS[t](args.genus, **kw))


COMMANDS = {
    "chi": _cmd_chi, "tau": _cmd_tau, "rho": _cmd_rho, "solve": _cmd_solve,
    "aj": _cmd_aj, "theta": _cmd_theta, "strata": _cmd_strata, "kdv": _cmd_kdv,
    "wronskian": _cmd_wronskian, "verify": _cmd_verify,
}


# ---------------------------------------------------------------------------
# goldens


def golden_value(kind: str, g: int):
    if kind == "tau":
        return tau(g)
    if kind == "rho":
        return rho(g).value
    if kind == "uvw":
        return {"U": list(reversed(uvw_scheme(g).U))}
    if kind == "wronskian":
        return wronskian_tau(g)
    raise KeyError(kind)


def default_golden_dir() -> Path:
    return Path(str(resources.files("mumford_kdv") / "goldens"))


def golden_suite(path=None) -> Report:
    """Byte comparison of canonical JSON against ``<kind>_g<genus>.json`` files."""
    path = Path(path) if path is not None else default_golden_dir()
    rep = Report({"subcommand": "golden", "options": {"dir": str(path)}})
    files = sorted(path.glob("*.json"))
    if not files:
        rep.error = {"kind": "golden", "message": f"no golden files in {path}"}
    for f in files:
        stem = f.stem
        kind, _, gtext = stem.rpartition("_g")
        try:
            g = int(gtext)
            got = dumps(golden_value(kind, g)) + "\n"
        except (ValueError, KeyError):
            rep.checks.append(Check(f"golden.{f.name}", False, {"file": f.name, "reason": "unknown golden"}))
            continue
        expected = f.read_text()
        ok = got == expected
        rep.checks.append(Check(f"golden.{f.name}", ok, None if ok else
                                {"file": f.name, "expected": expected.strip(), "got": got.strip()}))
        note = f.with_suffix(".note")
        if note.exists():
            rep.add(f"note.{f.stem}", note.read_text().strip())
    return rep


# ---------------------------------------------------------------------------
# entry points


def _command_echo(args) -> dict:
    opts = {k: v for k, v in sorted(vars(args).items())
            if k not in ("subcommand", "genus", "format") and v is not None and v is not False}
    return {"subcommand": args.subcommand, "genus": args.genus,
            "options": {k: v if isinstance(v, (int, str, bool)) else str(v) for k, v in opts.items()}}


def run(argv=None) -> Report:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return Report({"argv": argv}, error={"kind": "usage", "message": str(exc)})
    rep = Report(_command_echo(args), format=args.format)
    try:
        COMMANDS[args.subcommand](args, rep)
    except UsageError as exc:
        rep.error = {"kind": "usage", "message": str(exc)}
    return rep


def output_format(rep: Report) -> str:
    fmt = rep.format or os.environ.get(FORMAT_ENV, "text")
    return fmt if fmt in ("text", "json") else "text"


def main(argv=None) -> int:
    rep = run(argv)
    out = rep.render(output_format(rep))
    stream = sys.stderr if rep.exit_code == 2 else sys.stdout
    if out:
        print(out, file=stream)
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
