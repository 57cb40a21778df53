"""Command-line entry point: ``motivic-hurwitz <command> ...`` or ``python -m motivic_hurwitz``.

Every command produces a list of result payloads.  With ``--format json`` each
payload is wrapped in an output record and printed as one JSON object per
line; the default table format prints the same payloads as aligned text.
Exit status is 0 on success, 2 on a usage error and 1 on a computation error.
"""
from __future__ import annotations

import argparse
import json
from importlib import resources
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import __version__
from . import errors
from .bundles import enumerate_strata
from .ekedahl_flags import bsn_class, chain_statistics, flag_alternating_sum
from .hurwitz_formulas import (
    HurwitzQuery,
    hurwitz_class,
    tamagawa_closed_form,
    tamagawa_sum,
)
from .motivic_ring import to_series
from .ramification import AllowableCollection, RamProfile, allowable_closure, local_mass, mass_identity_check
from .zeta_euler import LocalFactor, euler_product_p1

USAGE_ERRORS = (
    errors.BadCharacteristic,
    errors.ConstraintViolation,
    errors.OutOfRange,
    errors.DegreeMismatch,
)


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    command: str
    parameters: dict
    result: dict
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "parameters": self.parameters,
                           "result": self.result, "version": self.version}, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "OutputRecord":
        obj = json.loads(line)
        return cls(obj["command"], obj["parameters"], obj["result"], obj["version"])


def load_schema(command: str) -> dict:
    """The JSON schema shipped for ``command``'s output records."""
    text = resources.files("motivic_hurwitz").joinpath("schemas", f"{command}.schema.json").read_text()
    return json.loads(text)


def parse_collection(d: int, text: str) -> AllowableCollection:
    if text == "all":
        return AllowableCollection.full(d)
    if text == "simple":
        return AllowableCollection.simply_branched(d)
    if text.startswith("list:"):
        body = text[5:].strip().strip('"')
        profiles = []
        depth = 0
        start = 0
        for i, ch in enumerate(body):
            if ch == "(":
                if depth == 0:
                    start = i
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    profiles.append(RamProfile.parse(body[start:i + 1]))
        if not profiles:
            raise UsageError(f"no profiles in {text!r}")
        for R in profiles:
            if R.d != d:
                raise UsageError(f"profile {R} is not a partition of {d}")
        return allowable_closure(d, profiles)
    raise UsageError(f"--ramification must be all, simple or list:..., got {text!r}")


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


# commands: each returns a list of result payloads

def cmd_class(a) -> list[dict]:
    coll = parse_collection(a.d, a.ramification)
    ans = hurwitz_class(HurwitzQuery(a.d, a.g, coll), a.codim)
    return [ans.to_json()]


def cmd_mass(a) -> list[dict]:
    coll = parse_collection(a.d, a.ramification)
    out = {"d": a.d, "ramification": coll.label(), "mass": str(local_mass(coll))}
    if coll.is_full():
        out["identity_check"] = mass_identity_check(a.d)
    return [out]


def cmd_strata(a) -> list[dict]:
    return [r.to_json() for r in enumerate_strata(a.d, a.g, a.max_codim)]


def cmd_tamagawa(a) -> list[dict]:
    s = tamagawa_sum(a.rank, a.deg, a.codim)
    closed = tamagawa_closed_form(a.rank)
    rhs = to_series(closed, a.codim)
    return [{
        "rank": a.rank,
        "deg": a.deg,
        "codim": a.codim,
        "sum": s.to_json(),
        "closed_form": str(closed),
        "closed_series": rhs.to_json(),
        "match": s.eq_mod_codim(rhs, 1 - a.rank ** 2, a.codim, inclusive=True),
    }]


def cmd_bsn(a) -> list[dict]:
    stats = chain_statistics(a.n)
    return [{
        "n": a.n,
        "chains": [{"n_f": nf, "d_f": df, "count": c} for (nf, df), c in stats.items()],
        "alternating_sum": str(flag_alternating_sum(a.n)),
        "class": str(bsn_class(a.n)),
    }]


def cmd_euler_product(a) -> list[dict]:
    try:
        f = LocalFactor.parse(a.factor)
    except (ValueError, SyntaxError, TypeError) as exc:
        raise UsageError(f"cannot parse factor {a.factor!r}: {exc}") from exc
    cls = euler_product_p1(f, a.codim)
    return [{"factor": str(f), "codim": a.codim, "class": cls.to_json(),
             "series": to_series(cls, a.codim).to_json()}]


def cmd_local_census(a) -> list[dict]:
    from .fq_oracle.census import ALLOWED_Q, local_census_d3, local_census_mc
    from .fq_oracle.fields import check_characteristic

    if a.d not in ALLOWED_Q:
        raise UsageError(f"--d must be one of {sorted(ALLOWED_Q)}")
    check_characteristic(a.q, a.d)
    if a.q not in ALLOWED_Q[a.d]:
        raise UsageError(f"--q for d={a.d} must be one of {ALLOWED_Q[a.d]}")
    if a.d == 3 and a.samples is None:
        census = local_census_d3(a.q)
    else:
        if a.d == 3:
            raise UsageError("the d=3 census is exhaustive; drop --samples")
        census = local_census_mc(a.d, a.q, a.samples or 100000, a.seed)
    out = census.records()
    rejected = sum(census.rejects.values())
    out.append({"profile": "reject", "count": rejected, "reasons": dict(sorted(census.rejects.items()))})
    return out


def cmd_fq_count(a) -> list[dict]:
    if a.d == 2:
        from .fq_oracle.binary import count_squarefree_binary, hyperelliptic_groupoid_count

        if a.g is None:
            raise UsageError("fq-count --d 2 needs --g")
        n = 2 * a.g + 2
        count = count_squarefree_binary(a.q, n)
        gc = hyperelliptic_groupoid_count(a.q, a.g)
        pred = a.q ** (2 * a.g + 2) - a.q ** (2 * a.g)
        sq_pred = a.q ** (n + 1) - a.q ** n - a.q ** (n - 1) + a.q ** (n - 2)
        return [{"profile": "squarefree", "count": count, "predicted": sq_pred, "ratio": _frac(Fraction(count, sq_pred))},
                {"profile": "groupoid", "count": _frac(gc), "predicted": str(pred), "ratio": _frac(gc / pred)}]
    if a.d == 3:
        from .fq_oracle.trigonal import predicted_groupoid_count, trigonal_census, truncated_local_product

        if not a.E:
            raise UsageError("fq-count --d 3 needs --E e1,e2")
        try:
            E = tuple(int(x) for x in a.E.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --E {a.E!r}") from exc
        if len(E) != 2 or min(E) <= 0:
            raise UsageError("--E must be two positive integers")
        mode = "sample" if a.samples else "exhaustive"
        c = trigonal_census(a.q, E, mode, a.seed, a.samples or 0)
        out = c.records()
        dens, se = c.smooth_density
        prod = truncated_local_product(a.q)
        out.append({"profile": "smooth_density", "count": c.smooth_total, "estimate": dens, "stderr": se,
                    "predicted": prod, "ratio": dens / prod})
        if mode == "exhaustive":
            g = sum(E) - 2
            pred = predicted_groupoid_count(a.q, g)
            gc = c.groupoid_count()
            out.append({"profile": "groupoid_s3", "count": _frac(gc), "predicted": _frac(pred),
                        "ratio": _frac(gc / pred), "deviation": float(gc / pred - 1)})
        return out
    raise UsageError("fq-count supports --d 2 and --d 3")


COMMANDS: dict[str, Callable] = {
    "class": cmd_class,
    "mass": cmd_mass,
    "strata": cmd_strata,
    "tamagawa": cmd_tamagawa,
    "bsn": cmd_bsn,
    "euler-product": cmd_euler_product,
    "local-census": cmd_local_census,
    "fq-count": cmd_fq_count,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="motivic-hurwitz", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("json", "table"), default="table")

    s = sub.add_parser("class", help="motivic class of a Hurwitz space")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--ramification", default="all")
    s.add_argument("--codim", type=int, default=None)
    common(s)

    s = sub.add_parser("mass", help="local mass polynomial of an allowable collection")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--ramification", default="all")
    common(s)

    s = sub.add_parser("strata", help="splitting-type strata up to a codimension")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--max-codim", type=int, required=True)
    common(s)

    s = sub.add_parser("tamagawa", help="truncated SL_n bundle sum against the zeta product")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--deg", type=int, default=0)
    s.add_argument("--codim", type=int, default=8)
    common(s)

    s = sub.add_parser("bsn", help="flag statistics and the class of BS_n")
    s.add_argument("--n", type=int, required=True)
    common(s)

    s = sub.add_parser("euler-product", help="Euler product over P^1 of a local factor")
    s.add_argument("--factor", required=True)
    s.add_argument("--codim", type=int, default=6)
    common(s)

    s = sub.add_parser("local-census", help="dual-numbers census over F_q")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    common(s)

    s = sub.add_parser("fq-count", help="point counts of degree 2 and 3 covers over F_q")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--g", type=int, default=None)
    s.add_argument("--E", default=None)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    common(s)
    return p


def _parameters(ns) -> dict:
    return {k: v for k, v in sorted(vars(ns).items()) if k not in ("command", "format")}


def _table(command: str, results: list[dict]) -> str:
    lines = []
    for i, res in enumerate(results):
        if i:
            lines.append("")
        width = max((len(k) for k in res), default=0)
        for k, v in res.items():
            if isinstance(v, (dict, list)):
                v = json.dumps(v)
            lines.append(f"{k.ljust(width)}  {v}")
    return "\n".join(lines)


def run(argv: list[str]) -> tuple[int, str, str]:
    """(exit code, stdout text, stderr text); the testable core of ``main``."""
    try:
        ns = build_parser().parse_args(argv)
        results = COMMANDS[ns.command](ns)
    except UsageError as exc:
        return 2, "", f"UsageError: {exc}\n"
    except USAGE_ERRORS as exc:
        return 2, "", f"{type(exc).__name__}: {exc}\n"
    except errors.MotivicError as exc:
        return 1, "", f"{type(exc).__name__}: {exc}\n"
    if ns.format == "json":
        params = _parameters(ns)
        text = "\n".join(OutputRecord(ns.command, params, r).to_json() for r in results)
    else:
        text = _table(ns.command, results)
    return 0, text + "\n", ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
