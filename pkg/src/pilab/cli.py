"""Command-line entry point: ``pilab verify|counts|expand|bijection|fuzz``.

Exit codes are 0 when everything checked out, 1 on a mathematical mismatch
and 2 on a usage or parse error.  Output is byte-identical across runs for
fixed flags; wall times are only printed with ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence, TextIO

from . import generators as gen
from .bijection import (
    BIJECTION_FAMILIES,
    BijectionError,
    ConstraintViolation,
    InadmissibleMove,
    InvalidVariant,
    ParseError,
    Triple,
    UnsupportedFamily,
    backward_map,
    base_partition,
    forward_map,
    fuzz_family,
    parse_parts,
)
from .partitions import (
    ConstraintFamily,
    InvalidGordonParams,
    UnknownFamily,
    count_table,
    totals,
)
from .qseries import BivariateSeries, TruncatedSeries

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
FALLBACK_N = 40


class UsageError(Exception):
    pass


def default_n() -> int:
    raw = os.environ.get("PIL_DEFAULT_N")
    if raw is None or raw == "":
        return FALLBACK_N
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"PIL_DEFAULT_N must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("PIL_DEFAULT_N must be non-negative")
    return n


# ---------------------------------------------------------------------------
# verify

Table = list  # c[n][m] or plain coefficient list


@dataclass
class SideResult:
    name: str
    kind: str  # "oracle", "multisum", "product", "cross-check"
    bivariate: bool
    status: str = "pass"
    first_mismatch: dict | None = None
    seconds: float = 0.0


@dataclass
class VerificationReport:
    identity: str
    N: int
    sides: list[SideResult] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if all(s.status == "pass" for s in self.sides) else "fail"

    @property
    def first_mismatch(self) -> dict | None:
        for s in self.sides:
            if s.first_mismatch:
                return {"side": s.name, **s.first_mismatch}
        return None

    def as_dict(self, timing: bool = False) -> dict:
        sides = []
        for s in self.sides:
            d = {"name": s.name, "kind": s.kind, "bivariate": s.bivariate,
                 "status": s.status, "first_mismatch": s.first_mismatch}
            if timing:
                d["seconds"] = round(s.seconds, 4)
            sides.append(d)
        return {"identity": self.identity, "N": self.N, "status": self.status,
                "first_mismatch": self.first_mismatch, "sides": sides}


Side = tuple[str, str, Callable[[int], object]]


def _oracle(tag: str) -> Side:
    f = ConstraintFamily.parse(tag)
    return (f"oracle:{f.name}", "oracle", lambda N: count_table(f, N))


def _biv(name: str, kind: str, fn: Callable[[int], BivariateSeries]) -> Side:
    return (name, kind, lambda N: fn(N).table())


def _uni(name: str, kind: str, fn: Callable[[int], TruncatedSeries]) -> Side:
    return (name, kind, lambda N: list(fn(N).coeffs))


def _family_sides(tag: str) -> list[Side]:
    f = ConstraintFamily.parse(tag)
    if f.tag == "schur":
        return [_oracle("schur"),
                _biv("schur:a", "multisum", lambda N: gen.schur_series("a", N)),
                _biv("schur:alpha", "multisum", lambda N: gen.schur_series("alpha", N))]
    return [_oracle(f.name), _biv(f"multisum:{f.name}", "multisum", lambda N: gen.family_multisum(f, N))]


def identity_sides(identity: str) -> list[Side]:
    t = identity.strip().lower()
    if t == "capparelli1":
        return _family_sides("cp1") + [
            _uni("product:capparelli1", "product", lambda N: gen.product_side("capparelli1", N)),
            _uni("aag", "cross-check", gen.aag_capparelli_series),
            _uni("sills", "cross-check", gen.sills_capparelli_series),
        ]
    if t == "capparelli2":
        return _family_sides("cp2") + [
            _uni("product:capparelli2", "product", lambda N: gen.product_side("capparelli2", N))]
    if t in ("gg1", "gg2"):
        which = int(t[-1])
        fam = "gg22" if which == 1 else "gg21"
        return _family_sides(fam) + [
            _biv(f"classical-gg{which}", "cross-check", lambda N: gen.classical_gg_series(which, N)),
            _uni(f"product:{t}", "product", lambda N: gen.product_side(t, N)),
        ]
    if t == "euler":
        odd = ConstraintFamily("euler_odd")
        return _family_sides("euler_distinct") + [
            ("oracle:euler_odd", "oracle", lambda N: totals(count_table(odd, N))),
            *(_uni(f"euler{w}", "cross-check", (lambda w: lambda N: gen.euler_series(w, N))(w))
              for w in (1, 2, 3)),
            _uni("product:euler", "product", lambda N: gen.product_side("euler", N)),
        ]
    if t == "schur-q2":
        return [_oracle("schur"),
                _biv("schur:a-q2", "multisum", lambda N: gen.schur_series("a", N, q_squared=True)),
                _biv("schur:alpha-q2", "multisum", lambda N: gen.schur_series("alpha", N, q_squared=True))]
    if t.startswith("gordon") or t in ("rr1", "rogers-ramanujan"):
        _, k, a = gen.parse_identity(t)
        sides = [_oracle(f"gordon-{k}-{a}"),
                 _biv(f"andrews-gordon-{k}-{a}", "multisum", lambda N: gen.andrews_gordon_multisum(k, a, N)),
                 _uni(f"product:gordon-{k}-{a}", "product", lambda N: gen.product_side(f"gordon-{k}-{a}", N))]
        if t in ("rr1", "rogers-ramanujan"):
            sides.insert(1, _oracle("rr1"))
        return sides
    try:
        return _family_sides(t)
    except UnknownFamily:
        raise gen.UnknownIdentity(identity) from None


IDENTITIES = ("capparelli1", "capparelli2", "gg1", "gg2", "euler", "rr1", "gordon-K-A",
              "schur-q2", "<family tag>")


def _compare(ref: Table, ref_biv: bool, got: Table, got_biv: bool, N: int) -> dict | None:
    if ref_biv and got_biv:
        for n in range(N + 1):
            for m in range(n + 1):
                e = ref[n][m] if m < len(ref[n]) else 0
                g = got[n][m] if m < len(got[n]) else 0
                if e != g:
                    return {"n": n, "m": m, "expected": e, "got": g}
        return None
    r = totals(ref) if ref_biv else ref
    g = totals(got) if got_biv else got
    for n in range(N + 1):
        if r[n] != g[n]:
            return {"n": n, "m": None, "expected": r[n], "got": g[n]}
    return None


def cmd_verify(identity: str, N: int) -> VerificationReport:
    sides = identity_sides(identity)
    rep = VerificationReport(identity, N)
    ref = ref_biv = None
    for name, kind, fn in sides:
        t0 = time.perf_counter()
        data = fn(N)
        dt = time.perf_counter() - t0
        biv = bool(data) and isinstance(data[0], list)
        res = SideResult(name, kind, biv, seconds=dt)
        if ref is None:
            ref, ref_biv = data, biv
        else:
            res.first_mismatch = _compare(ref, ref_biv, data, biv, N)
            if res.first_mismatch:
                res.status = "fail"
        rep.sides.append(res)
    return rep


def _write_verify(rep: VerificationReport, fmt: str, timing: bool, out: TextIO) -> None:
    if fmt == "json":
        out.write(json.dumps(rep.as_dict(timing)) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    head = ["identity", "N", "side", "kind", "status", "n", "m", "expected", "got"]
    w.writerow(head + (["seconds"] if timing else []))
    for s in rep.sides:
        mm = s.first_mismatch or {}
        row = [rep.identity, rep.N, s.name, s.kind, s.status,
               *("" if mm.get(k) is None else mm[k] for k in ("n", "m", "expected", "got"))]
        w.writerow(row + ([f"{s.seconds:.4f}"] if timing else []))


# ---------------------------------------------------------------------------
# counts and expand


def cmd_counts(family: str, n_max: int) -> list[tuple[int, int, int]]:
    f = ConstraintFamily.parse(family)
    c = count_table(f, n_max)
    return [(n, m, v) for n, row in enumerate(c) for m, v in enumerate(row) if v]


def _write_rows(rows: Sequence[tuple], keys: Sequence[str], fmt: str, out: TextIO) -> None:
    if fmt == "json":
        for r in rows:
            out.write(json.dumps(dict(zip(keys, r))) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(keys)
    w.writerows(rows)


def _expand_target(name: str) -> Callable[[int], TruncatedSeries | BivariateSeries]:
    t = name.strip().lower()
    if t.startswith("product:"):
        ident = t.split(":", 1)[1]
        gen.parse_identity(ident)
        return lambda N: gen.product_side(ident, N)
    if t.startswith("multisum:"):
        f = ConstraintFamily.parse(t.split(":", 1)[1])
        return lambda N: gen.family_multisum(f, N)
    if t.startswith("andrews-gordon"):
        _, k, a = gen.parse_identity("gordon" + t[len("andrews-gordon"):])
        return lambda N: gen.andrews_gordon_multisum(k, a, N)
    simple = {
        "aag": gen.aag_capparelli_series,
        "sills": gen.sills_capparelli_series,
        "euler1": lambda N: gen.euler_series(1, N),
        "euler2": lambda N: gen.euler_series(2, N),
        "euler3": lambda N: gen.euler_series(3, N),
        "classical-gg1": lambda N: gen.classical_gg_series(1, N),
        "classical-gg2": lambda N: gen.classical_gg_series(2, N),
        "schur-a": lambda N: gen.schur_series("a", N),
        "schur-alpha": lambda N: gen.schur_series("alpha", N),
        "schur-a-q2": lambda N: gen.schur_series("a", N, q_squared=True),
        "schur-alpha-q2": lambda N: gen.schur_series("alpha", N, q_squared=True),
    }
    if t in simple:
        return simple[t]
    raise UsageError(f"unknown series {name!r}")


EXPAND_NAMES = ("product:<identity>", "multisum:<family>", "andrews-gordon-K-A", "aag", "sills",
                "euler1", "euler2", "euler3", "classical-gg1", "classical-gg2",
                "schur-a", "schur-alpha", "schur-a-q2", "schur-alpha-q2")


def cmd_expand(name: str, N: int, at_x_one: bool = False) -> tuple[list[str], list[tuple]]:
    s = _expand_target(name)(N)
    if isinstance(s, BivariateSeries):
        if at_x_one:
            s = s.at_x_equals_one()
        else:
            rows = [(n, m, v) for n, row in enumerate(s.table()) for m, v in enumerate(row) if v]
            return ["n", "m", "coefficient"], rows
    return ["n", "coefficient"], list(enumerate(s.coeffs))


# ---------------------------------------------------------------------------
# bijection and fuzz


def _int_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    text = text.strip().replace("+", ",")
    if not text:
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _join(xs: Sequence[int]) -> str:
    return ",".join(map(str, xs))


def cmd_bijection(
    direction: str, family: str, text: str | None = None, n1: int | None = None,
    n2: int | None = None, mu: str | None = None, eta: str | None = None,
    anchored: bool = False, trace: bool = False,
) -> str:
    f = ConstraintFamily.parse(family)
    lines: list[str] = []
    if direction == "forward":
        mu_l, eta_l = _int_list(mu), _int_list(eta)
        n1 = len(mu_l) if n1 is None and mu_l is not None else (n1 or 0)
        n2 = len(eta_l) if n2 is None and eta_l is not None else (n2 or 0)
        mu_l = [0] * n1 if mu_l is None else mu_l
        eta_l = [0] * n2 if eta_l is None else eta_l
        if len(mu_l) != n1 or len(eta_l) != n2:
            raise ParseError("mu needs n1 entries and eta n2 entries, zeros included")
        try:
            t = Triple.of(mu_l, eta_l)
        except ValueError as e:
            raise ParseError(str(e)) from None
        lam, tr = forward_map(f, t, anchored)
        if trace:
            lines.append(tr.render())
        lines.append(tr.end.format())
        lines.append(f"weight {lam.weight}")
        return "\n".join(lines)
    if direction == "backward":
        if text is None:
            raise ParseError("backward needs a partition, e.g. [3,6],9,14,[18,21]")
        parts = parse_parts(text)
        t, anch, tr = backward_map(f, parts)
        beta = base_partition(f, t.n1, t.n2, anch)
        if trace:
            lines.append(tr.render())
        lines.append(f"beta {beta.format()}")
        lines.append(f"weight {beta.weight}")
        lines.append(f"n1 {t.n1}")
        lines.append(f"n2 {t.n2}")
        lines.append(f"mu {_join(t.mu.parts)}")
        lines.append(f"eta {_join(t.eta.parts)}")
        lines.append(f"anchored {'yes' if anch else 'no'}")
        return "\n".join(lines)
    raise UsageError(f"direction must be forward or backward, got {direction!r}")


def cmd_fuzz(family: str, n_max: int, seed: int = 0, samples: int = 0) -> list[dict]:
    if family == "all":
        fams = [ConstraintFamily(t) for t in BIJECTION_FAMILIES]
    else:
        fams = [ConstraintFamily.parse(family)]
    return [fuzz_family(f, n_max, seed, samples).as_dict() for f in fams]


FUZZ_KEYS = ("family", "n_max", "seed", "checked_partitions", "checked_triples", "sampled",
             "counts_match", "failures", "status")


def _write_fuzz(reports: list[dict], fmt: str, out: TextIO) -> None:
    if fmt == "json":
        for r in reports:
            out.write(json.dumps(r) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(FUZZ_KEYS)
    for r in reports:
        w.writerow([len(r[k]) if k == "failures" else r[k] for k in FUZZ_KEYS])


# ---------------------------------------------------------------------------
# argument parsing


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pilab", description="Partition identity lab.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="csv"):
        sp.add_argument("--max-n", type=_nonneg, default=None,
                        help=f"truncation order (default: $PIL_DEFAULT_N or {FALLBACK_N})")
        sp.add_argument("--format", choices=("json", "csv"), default=fmt_default)

    v = sub.add_parser("verify", help="compare every side of an identity")
    v.add_argument("--identity", required=True, help=", ".join(IDENTITIES))
    common(v, "json")
    v.add_argument("--timing", action="store_true", help="include wall time per side")

    c = sub.add_parser("counts", help="brute-force c[n][m] table for a family")
    c.add_argument("--family", required=True)
    common(c)

    e = sub.add_parser("expand", help="coefficients of a series or product")
    e.add_argument("--series", required=True, help=", ".join(EXPAND_NAMES))
    e.add_argument("--at-x-one", action="store_true", help="sum bivariate series over m")
    common(e)

    b = sub.add_parser("bijection", help="run the forward or backward map")
    b.add_argument("direction", choices=("forward", "backward"))
    b.add_argument("--family", required=True)
    b.add_argument("input", nargs="?", help="partition for backward, e.g. [3,6],9,14,[18,21]")
    b.add_argument("--n1", type=_nonneg)
    b.add_argument("--n2", type=_nonneg)
    b.add_argument("--mu", help="comma-separated, ascending, zeros included")
    b.add_argument("--eta", help="comma-separated multiples of the step, ascending")
    b.add_argument("--anchored", action="store_true", help="use the base with a fixed smallest part")
    b.add_argument("--trace", action="store_true")

    f = sub.add_parser("fuzz", help="round-trip and counting checks for the bijection")
    f.add_argument("--family", required=True, help="a family tag or 'all'")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--samples", type=_nonneg, default=0, help="extra seeded random triples")
    common(f, "json")
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # an optional positional after flags is left over by argparse; claim it here
        if args.command == "bijection" and args.input is None and len(extra) == 1:
            args.input, extra = extra[0], []
        if extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        N = args.max_n if getattr(args, "max_n", None) is not None else default_n()
        if args.command == "verify":
            rep = cmd_verify(args.identity, N)
            _write_verify(rep, args.format, args.timing, out)
            return EXIT_OK if rep.status == "pass" else EXIT_MISMATCH
        if args.command == "counts":
            _write_rows(cmd_counts(args.family, N), ("n", "m", "count"), args.format, out)
            return EXIT_OK
        if args.command == "expand":
            keys, rows = cmd_expand(args.series, N, args.at_x_one)
            _write_rows(rows, keys, args.format, out)
            return EXIT_OK
        if args.command == "bijection":
            out.write(cmd_bijection(args.direction, args.family, args.input, args.n1, args.n2,
                                    args.mu, args.eta, args.anchored, args.trace) + "\n")
            return EXIT_OK
        if args.command == "fuzz":
            reports = cmd_fuzz(args.family, N, args.seed, args.samples)
            _write_fuzz(reports, args.format, out)
            return EXIT_OK if all(r["status"] == "pass" for r in reports) else EXIT_MISMATCH
    except (BijectionError, InadmissibleMove) as e:
        err.write(f"error: {e}\n")
        return EXIT_MISMATCH
    except (UsageError, ParseError, ConstraintViolation, UnknownFamily, InvalidGordonParams,
            gen.UnknownIdentity, UnsupportedFamily, InvalidVariant, ValueError) as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
