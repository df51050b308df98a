"""Command-line front end.

Every subcommand parses a RunConfig, calls one library operation and writes
its records; no arithmetic happens here.

Exit codes: 0 success, 2 validation error, 3 budget exceeded, 4 root-finder
failure, 1 Hoelder violation, 5 cache warnings under --strict.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field, fields

from . import asymptotics, characters, lfunction, moments
from .characters import QuadraticCharacter
from .errors import DEFAULT_BUDGET, BudgetError, DomainError, NumericError
from .family import FamilySpec
from .moments import HolderViolation, MomentReport
from .poly import Polynomial, enumerate_monic
from .records import provenance_line, render

EXIT_OK = 0
EXIT_HOLDER = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_NUMERIC = 4
EXIT_STRICT = 5

COMMANDS = ("lpoly", "moments", "holder", "primes", "ortho", "charsum", "count",
            "afe-check", "rh-check", "series", "constants", "harmonic")


class ConfigError(DomainError):
    pass


@dataclass
class RunConfig:
    command: str = ""
    q: int | None = None
    g: list | None = None
    n: list | None = None
    k: list | None = None
    x: list | None = None
    dmax: int | None = None
    budget: int = DEFAULT_BUDGET
    threads: int = 1
    out: str | None = None
    format: str = "csv"
    cache: str | None = None
    f: str | None = None
    r: str | None = None
    h: str | None = None
    method: str | None = None
    tol: float = 1e-9
    kind: str = "alpha"
    no_timestamp: bool = False
    strict: bool = False
    warnings: list = field(default_factory=list)

    def echo(self):
        skip = {"command", "warnings", "out"}
        out = {}
        for fl in fields(self):
            if fl.name in skip:
                continue
            v = getattr(self, fl.name)
            if isinstance(v, list):
                v = ",".join(str(i) for i in v)
            out[fl.name] = v
        return out

    def need(self, name):
        v = getattr(self, name)
        if v is None:
            raise ConfigError(f"missing required parameter '{name}'")
        return v

    def single(self, name):
        v = self.need(name)
        if len(v) != 1:
            raise ConfigError(f"parameter '{name}' takes a single value here")
        return v[0]


_LIST_KEYS = {"g", "n", "k", "x"}
_INT_KEYS = {"q", "dmax", "budget", "threads"}
_FLOAT_KEYS = {"tol"}
_BOOL_KEYS = {"no_timestamp", "strict"}
_STR_KEYS = {"out", "format", "cache", "f", "r", "h", "method", "kind"}
_CONFIG_KEYS = _LIST_KEYS | _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _STR_KEYS


def _int_list(text):
    try:
        out = []
        for part in str(text).split(","):
            if "..." in part:
                lo, hi = part.split("...")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        return out
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _convert(key, value):
    try:
        if key in _LIST_KEYS:
            return _int_list(value)
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _BOOL_KEYS:
            v = str(value).strip().lower()
            if v not in ("1", "0", "true", "false", "yes", "no"):
                raise ValueError
            return v in ("1", "true", "yes")
    except (ValueError, argparse.ArgumentTypeError):
        raise ConfigError(f"bad value for '{key}': {value!r}") from None
    return value


def read_config(path):
    """key=value lines, '#' comments, UTF-8."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"config line {lineno}: unknown key '{key}'")
        values[key] = _convert(key, value)
    return values


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int)
    common.add_argument("--g", type=_int_list, help="genus or comma list (a...b ranges allowed)")
    common.add_argument("--n", type=_int_list, help="degree of the prime family")
    common.add_argument("--k", type=_int_list)
    common.add_argument("--x", type=_int_list, help="Dirichlet polynomial / sum cutoff")
    common.add_argument("--dmax", type=int)
    common.add_argument("--budget", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--cache")
    common.add_argument("--config")
    common.add_argument("--f", help="polynomial in q<q>:<digits> form")
    common.add_argument("--r")
    common.add_argument("--h")
    common.add_argument("--method")
    common.add_argument("--tol", type=float)
    common.add_argument("--kind", choices=("alpha", "shell", "partial"))
    common.add_argument("--no-timestamp", dest="no_timestamp", action="store_const", const=True)
    common.add_argument("--strict", action="store_const", const=True)
    parser = argparse.ArgumentParser(prog="ffquad", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def parse_config(argv):
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command)
    if ns.config:
        for key, value in read_config(ns.config).items():
            setattr(cfg, key, value)
    for fl in fields(RunConfig):
        if fl.name in ("command", "warnings"):
            continue
        v = getattr(ns, fl.name, None)
        if v is not None:
            setattr(cfg, fl.name, v)
    if cfg.threads < 1:
        raise ConfigError("'threads' must be at least 1")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"unknown format '{cfg.format}'")
    return cfg


# -- cache -----------------------------------------------------------------

def _open_cache(cfg):
    if cfg.cache is None:
        return None
    if os.path.isdir(cfg.cache):
        raise ConfigError(f"cache path {cfg.cache} is a directory")
    if not os.path.exists(cfg.cache):
        return {}
    try:
        records, warnings = lfunction.load_cache(cfg.cache)
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read cache {cfg.cache}: {exc}") from None
    for lineno, msg in warnings:
        print(f"warning: {cfg.cache}:{lineno}: {msg}", file=sys.stderr)
    cfg.warnings.extend(warnings)
    return records


def _save_cache(cfg, cache):
    if cfg.cache is not None and cache is not None:
        try:
            lfunction.store_cache(cfg.cache, cache)
        except OSError as exc:
            raise ConfigError(f"cannot write cache {cfg.cache}: {exc.strerror}") from None


# -- subcommands -------------------------------------------------------------

def _family(cfg, g):
    return FamilySpec(cfg.need("q"), g)


def _poly(text, name):
    if text is None:
        raise ConfigError(f"missing required parameter '{name}'")
    return Polynomial.parse(text)


def cmd_lpoly(cfg):
    method = cfg.method or "full"
    cache = _open_cache(cfg)
    if cfg.f is not None:
        D = _poly(cfg.f, "f")
        chars = [QuadraticCharacter(D)]
    else:
        chars = list(moments.enumerate_family(_family(cfg, cfg.single("g")), budget=cfg.budget))
    g = chars[0].genus if chars else 0
    columns = ["q", "g", "D"] + [f"c{n}" for n in range(2 * g + 1)] + ["fe"]
    rows = []
    for chr in chars:
        L = cache.get(chr.D) if cache is not None else None
        if L is None:
            L = lfunction.l_coefficients(chr, method, cfg.budget)
            if cache is not None:
                cache[chr.D] = L
        row = {"q": L.q, "g": L.g, "D": chr.D.to_text(),
               "fe": int(lfunction.functional_equation_check(L))}
        row.update({f"c{n}": c for n, c in enumerate(L.coeffs)})
        rows.append(row)
    _save_cache(cfg, cache)
    return columns, rows, None


def cmd_moments(cfg, holder=False):
    cache = _open_cache(cfg)
    ks = cfg.k or [2]
    rows = []
    timing = not cfg.no_timestamp
    for g in cfg.need("g"):
        fam = _family(cfg, g)
        if holder:
            for k in ks:
                xs = cfg.x or [moments.paper_cutoff(g, k)]
                for rep in moments.holder_grid(fam, [k], xs, cfg.threads, cfg.method or "half",
                                               cache, cfg.budget):
                    if rep.holder_holds is False:
                        raise HolderViolation(f"Hoelder bound exceeded at g={g} k={k} x={rep.x}")
                    row = rep.row(timing)
                    row["holds"] = "" if rep.holder_holds is None else int(rep.holder_holds)
                    rows.append(row)
        else:
            for k in ks:
                for x in (cfg.x or [None]):
                    rep = moments.family_moment(fam, k, x, cfg.threads, cfg.method or "half",
                                                cache, cfg.budget)
                    rows.append(rep.row(timing))
    _save_cache(cfg, cache)
    columns = list(MomentReport.CSV_COLUMNS) + (["holds"] if holder else [])
    return columns, rows, None


def cmd_primes(cfg):
    rows = []
    timing = not cfg.no_timestamp
    for n in cfg.need("n"):
        for k in cfg.k or [2]:
            x = (cfg.x or [0])[0]
            rep = moments.prime_moment(cfg.need("q"), n, k, x, cfg.method or "half", cfg.budget)
            rows.append(rep.row(timing))
    return list(MomentReport.CSV_COLUMNS), rows, None


def cmd_ortho(cfg):
    q = cfg.need("q")
    if cfg.f is not None:
        mods = [_poly(cfg.f, "f")]
    else:
        dmax = cfg.dmax if cfg.dmax is not None else 2
        mods = [m for d in range(dmax + 1) for m in enumerate_monic(q, d, budget=cfg.budget)]
    rows = []
    for g in cfg.need("g"):
        fam = _family(cfg, g)
        for m in mods:
            rec = characters.orthogonality_sum(m, fam, cfg.budget)
            row = rec.row()
            row["coprime_count"] = "" if rec.coprime_count is None else rec.coprime_count
            rows.append(row)
    columns = ["q", "g", "n", "square", "exact_sum", "coprime_count", "ratio"]
    return columns, rows, None


def cmd_charsum(cfg):
    D = _poly(cfg.f, "f")
    chr = QuadraticCharacter(D)
    xs = cfg.x if cfg.x is not None else list(range(D.degree + 1))
    rows = [characters.char_sum_fixed_degree(chr, x, cfg.budget).row() for x in xs]
    return ["q", "D", "x_or_n", "exact_sum", "ratio"], rows, None


def cmd_count(cfg):
    f = _poly(cfg.f, "f")
    rows = [moments.squarefree_coprime_count(f, _family(cfg, g), cfg.budget).row()
            for g in cfg.need("g")]
    return ["q", "g", "f", "exact", "main_term", "main_float", "residual"], rows, None


def cmd_afe(cfg):
    rows, notes = [], []
    for g in cfg.need("g"):
        fam = _family(cfg, g)
        checked = passed = 0
        for chr in moments.enumerate_family(fam, budget=cfg.budget):
            checked += 1
            passed += lfunction.afe_identity_check(chr, budget=cfg.budget)
        rows.append({"q": fam.q, "g": g, "checked": checked, "passed": passed})
        notes.append(f"{passed}/{checked} pass")
    return ["q", "g", "checked", "passed"], rows, "\n".join(notes)


def cmd_rh(cfg):
    rows, notes = [], []
    for g in cfg.need("g"):
        fam = _family(cfg, g)
        checked = passed = 0
        worst = worst_prod = 0.0
        for chr in moments.enumerate_family(fam, budget=cfg.budget):
            L = lfunction.l_coefficients(chr, cfg.method or "full", cfg.budget)
            rep = lfunction.critical_circle_check(L, cfg.tol)
            checked += 1
            passed += rep.passed
            worst = max(worst, rep.max_deviation)
            worst_prod = max(worst_prod, rep.root_product_rel_error)
        rows.append({"q": fam.q, "g": g, "checked": checked, "passed": passed,
                     "max_deviation": f"{worst:.17g}",
                     "max_root_product_rel_error": f"{worst_prod:.17g}"})
        notes.append(f"{passed}/{checked} pass")
    columns = ["q", "g", "checked", "passed", "max_deviation", "max_root_product_rel_error"]
    return columns, rows, "\n".join(notes)


def cmd_series(cfg):
    q, N = cfg.need("q"), cfg.dmax if cfg.dmax is not None else 10
    rows = []
    for k in cfg.k or [2]:
        if (cfg.method or "euler") == "direct":
            s = asymptotics.zf_direct_coeffs(q, k, N, cfg.budget)
        elif (cfg.method or "euler") == "euler":
            s = asymptotics.zf_euler_coeffs(q, k, N)
        else:
            raise ConfigError(f"unknown series method '{cfg.method}'")
        for r in s.rows():
            rows.append({"k": k, **r})
    return ["k", "n", "coeff"], rows, None


def _frac(v):
    return f"{v.numerator}/{v.denominator}"


def cmd_constants(cfg):
    q = cfg.need("q")
    dmax = cfg.dmax if cfg.dmax is not None else 12
    rows, notes = [], []
    for k in cfg.k or [2]:
        if cfg.kind == "alpha":
            lc = asymptotics.leading_constant(q, k, dmax)
            for d, fac in enumerate(lc.local_factors, 1):
                running = asymptotics.leading_constant(q, k, d).alpha
                rows.append({"k": k, "q": q, "x_or_dmax": d, "value": _frac(fac),
                             "ratio_float": f"{running:.17g}"})
            notes.append(f"k={k} alpha={lc.alpha:.17g} C_k={lc.C_k:.17g} "
                         f"C_k_degree={lc.C_k_degree:.17g} alpha_s={lc.alpha_s:.17g}")
        elif cfg.kind == "shell":
            for x, z, ratio, _ in asymptotics.shell_sum_diagnostic(q, k, dmax):
                rows.append({"k": k, "q": q, "x_or_dmax": x, "value": _frac(z),
                             "ratio_float": f"{ratio:.17g}"})
        else:
            for z, acc, ratio in asymptotics.partial_sum_table(q, k, dmax):
                rows.append({"k": k, "q": q, "x_or_dmax": z, "value": _frac(acc),
                             "ratio_float": f"{ratio:.17g}"})
    return ["k", "q", "x_or_dmax", "value", "ratio_float"], rows, "\n".join(notes) or None


def cmd_harmonic(cfg):
    r = _poly(cfg.r or f"q{cfg.need('q')}:10", "r")
    h = _poly(cfg.h or f"q{r.q}:1", "h")
    L_max = cfg.single("x") if cfg.x else 8
    rows = []
    for L, v, diff in asymptotics.harmonic_table(r, h, L_max, cfg.budget):
        rows.append({"q": r.q, "r": r.to_text(), "h": h.to_text(), "L": L, "value": _frac(v),
                     "diff_float": "nan" if math.isnan(diff) else f"{diff:.17g}"})
    return ["q", "r", "h", "L", "value", "diff_float"], rows, None


HANDLERS = {
    "lpoly": cmd_lpoly,
    "moments": cmd_moments,
    "holder": lambda cfg: cmd_moments(cfg, holder=True),
    "primes": cmd_primes,
    "ortho": cmd_ortho,
    "charsum": cmd_charsum,
    "count": cmd_count,
    "afe-check": cmd_afe,
    "rh-check": cmd_rh,
    "series": cmd_series,
    "constants": cmd_constants,
    "harmonic": cmd_harmonic,
}


def run(cfg):
    """Execute a parsed RunConfig and return the full output text."""
    columns, rows, note = HANDLERS[cfg.command](cfg)
    text = provenance_line(cfg.command, cfg.echo(), not cfg.no_timestamp) + "\n"
    text += render(rows, columns, cfg.format)
    return text, note


def main(argv=None):
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        text, note = run(cfg)
        if cfg.out:
            try:
                with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)
            except OSError as exc:
                raise ConfigError(f"cannot write {cfg.out}: {exc.strerror}") from None
        else:
            sys.stdout.write(text)
        if note:
            print(note, file=sys.stderr)
    except SystemExit as exc:
        return exc.code
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except HolderViolation as exc:
        print(f"hoelder violation: {exc}", file=sys.stderr)
        return EXIT_HOLDER
    if cfg.strict and cfg.warnings:
        print(f"{len(cfg.warnings)} cache warning(s)", file=sys.stderr)
        return EXIT_STRICT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
