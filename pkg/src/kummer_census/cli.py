"""Command-line front end: ``kummer-census <command> [options]``.

Scalar results are written as JSON, tables as TSV.  Exit codes: 2 for bad
configuration, 3 when the evaluation budget runs out, 4 when a verification
check fails.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from .abgroup import (GroupSpec, all_group_shapes, element_order, mobius_identity_check, phi,
                      subgroups)
from .errors import BudgetExceeded, ConfigError, VerificationError

THREADS_ENV = "KUMMER_THREADS"
PATHS = ("mobius", "direct", "series", "abstract", "all")
SUITES = ("mobius", "groups", "census", "zeta", "all")


@dataclass
class JobConfig:
    command: str
    p: int | None = None
    e: int = 1
    q: int | None = None
    group: str = "2"
    genus: tuple[int, ...] = ()
    k: tuple[int, ...] | None = None
    points: tuple[int, ...] = ()
    E: tuple[tuple[int, ...], ...] = ()
    weights: tuple[int, ...] | None = None
    dmax: int = 12
    cutoff: int = 14
    budget: int = 10 ** 8
    threads: int = 1
    path: str = "mobius"
    format: str | None = None
    output: str | None = None
    suite: str = "all"
    max_order: int = 64
    seed: int = 0

    # -- derived
    def field_ctx(self):
        from .ffield import make_field, prime_power
        if self.q is not None:
            try:
                p, e = prime_power(self.q)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            if self.p is not None and (self.p, self.e) != (p, e):
                raise ConfigError(f"--q {self.q} disagrees with --p {self.p} --e {self.e}")
        elif self.p is not None:
            p, e = self.p, self.e
        else:
            raise ConfigError("give the field with --q or --p/--e")
        try:
            return make_field(p, e)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def group_spec(self) -> GroupSpec:
        try:
            G = GroupSpec.parse(self.group)
        except ValueError as exc:
            raise ConfigError(f"bad group {self.group!r}: {exc}") from None
        return G

    def constraint(self):
        from .census import CensusConstraint
        return CensusConstraint(self.k, self.points, self.E)

    def validate(self):
        if self.threads < 1:
            raise ConfigError("thread count must be >= 1")
        if self.path not in PATHS:
            raise ConfigError(f"unknown path {self.path!r}; choose from {', '.join(PATHS)}")
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.format not in (None, "json", "tsv"):
            raise ConfigError("format must be json or tsv")
        if self.dmax < 0 or self.cutoff < 1 or self.budget < 1:
            raise ConfigError("dmax, cutoff and budget must be positive")
        if any(g < 0 for g in self.genus):
            raise ConfigError("genus must be nonnegative")
        if self.command in ("verify",):
            return
        G = self.group_spec()
        if G.is_trivial():
            raise ConfigError("the group must be nontrivial")
        ctx = self.field_ctx()
        if (ctx.q - 1) % G.exponent:
            raise ConfigError(f"q = {ctx.q} is not 1 mod {G.exponent}; no Kummer covers")
        if self.k is not None and len(self.k) != G.n:
            raise ConfigError(f"--k needs {G.n} entries")
        if len(self.E) != len(self.points):
            raise ConfigError("--E needs one row per entry of --points")
        if self.weights is not None and len(self.weights) != len(G.nonzero()):
            raise ConfigError(f"--weights needs {len(G.nonzero())} entries")
        self.constraint().normalized(G, ctx)


# ----------------------------------------------------------------------------
# parsing

def _int_list(text: str) -> tuple[int, ...]:
    out = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        lo, sep, hi = part[1:].partition("-")
        if sep:
            out.extend(range(int(part[0] + lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def _matrix(text: str) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row.split(",")) for row in text.replace(" ", "").split(";") if row)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kummer-census",
                                 description="Exact censuses of abelian Kummer covers of P^1 over F_q.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with the same keys as the flags")
        p.add_argument("--q", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--e", type=int)
        p.add_argument("--group", help="invariant factors, e.g. 2 or 2,2 or 2x4")
        p.add_argument("--genus", help="genus list, e.g. 1 or 0-3 or 1,3")
        p.add_argument("--k", help="degree classes d in G, comma separated")
        p.add_argument("--points", help="constraint x-coordinates, comma separated")
        p.add_argument("--E", help="character exponents, rows split by ';'")
        p.add_argument("--weights", help="override c(alpha) in the order of the nonzero elements")
        p.add_argument("--dmax", type=int)
        p.add_argument("--cutoff", type=int, help="prime-degree cutoff for L-constants")
        p.add_argument("--budget", type=int)
        p.add_argument("--threads", type=int, help=f"worker processes (default ${THREADS_ENV} or 1)")
        p.add_argument("--format", choices=("json", "tsv"))
        p.add_argument("--output", help="write here instead of stdout")

    for name, hlp in (("census", "count curves with Galois group exactly G"),
                      ("strata", "list strata degree vectors for a genus"),
                      ("series", "coefficients of the generating series"),
                      ("predict", "leading constants and main terms for (Z/Q)^n"),
                      ("distribution", "point-count histogram against the i.i.d. model"),
                      ("verify", "run invariant suites")):
        p = sub.add_parser(name, help=hlp)
        common(p)
        if name == "census":
            p.add_argument("--path", choices=PATHS)
        if name == "verify":
            p.add_argument("--suite", choices=SUITES)
            p.add_argument("--max-order", dest="max_order", type=int)
            p.add_argument("--seed", type=int)
    return ap


_CONVERTERS = {"genus": _int_list, "k": _int_list, "points": _int_list, "E": _matrix,
               "weights": _int_list}


def parse_config(argv) -> JobConfig:
    ns = _build_parser().parse_args(argv)
    raw: dict = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        raw = {k.replace("-", "_"): v for k, v in raw.items()}
    for key, val in vars(ns).items():
        if key != "config" and val is not None:
            raw[key] = val
    known = {f.name for f in fields(JobConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        for key, conv in _CONVERTERS.items():
            val = raw.get(key)
            if isinstance(val, str):
                raw[key] = conv(val)
            elif isinstance(val, int):
                raw[key] = (val,)
            elif isinstance(val, list):
                raw[key] = tuple(tuple(x) if isinstance(x, list) else x for x in val)
        if isinstance(raw.get("group"), (int, list)):
            g = raw["group"]
            raw["group"] = ",".join(map(str, g)) if isinstance(g, list) else str(g)
    except ValueError as exc:
        raise ConfigError(f"cannot parse option: {exc}") from None
    if "threads" not in raw:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                raw["threads"] = int(env)
            except ValueError:
                raise ConfigError(f"{THREADS_ENV}={env!r} is not an integer") from None
    cfg = JobConfig(**raw)
    cfg.validate()
    return cfg


# ----------------------------------------------------------------------------
# serialization

def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _tsv(header, rows) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def _group_label(G: GroupSpec) -> str:
    return "x".join(f"Z/{r}" for r in G.invariant_factors)


def _alpha_label(a) -> str:
    return "(" + ",".join(map(str, a)) + ")"


def _need_genus(cfg: JobConfig) -> tuple[int, ...]:
    if not cfg.genus:
        raise ConfigError(f"{cfg.command} needs --genus")
    return cfg.genus


# ----------------------------------------------------------------------------
# commands

def cmd_census(cfg: JobConfig) -> str:
    from .census import count_H_star
    G, ctx = cfg.group_spec(), cfg.field_ctx()
    cc = cfg.constraint()
    paths = ("direct", "mobius", "series") if cfg.path == "all" else (cfg.path,)
    records = []
    for g in _need_genus(cfg):
        counts = {pth: count_H_star(G, ctx, g, cc, path=pth, workers=cfg.threads, budget=cfg.budget)
                  for pth in paths}
        if len(set(counts.values())) != 1:
            raise VerificationError(f"paths disagree at g={g}: {counts}")
        monic = next(iter(counts.values()))
        records.append({"G": _group_label(G), "q": ctx.q, "g": g,
                        "constraint": cc.normalized(G, ctx).to_dict(), "path": cfg.path,
                        "count": str(G.order * monic), "count_monic": str(monic),
                        **({"paths": {k: str(v) for k, v in counts.items()}} if len(paths) > 1 else {})})
    if cfg.format == "tsv":
        return _tsv(["g", "count", "count_monic"],
                    [(r["g"], r["count"], r["count_monic"]) for r in records])
    return _dumps(records[0] if len(records) == 1 else records)


def cmd_strata(cfg: JobConfig) -> str:
    from .census import degree_vector, genus_strata
    G = cfg.group_spec()
    labels = [_alpha_label(a) for a in G.nonzero()]
    rows = []
    for g in _need_genus(cfg):
        for sv in genus_strata(G, g, cfg.k, cfg.weights):
            rows.append((g, sv, degree_vector(G, sv)))
    if cfg.format == "json":
        return _dumps([{"g": g, "degrees": dict(zip(labels, sv)), "d": list(d)} for g, sv, d in rows])
    return _tsv(["g", *labels, "d"], [(g, *sv, _alpha_label(d)) for g, sv, d in rows])


def cmd_series(cfg: JobConfig) -> str:
    from .genfun import series_F
    G, ctx = cfg.group_spec(), cfg.field_ctx()
    s = series_F(G, ctx, cfg.constraint(), cfg.weights, cfg.dmax)
    vals = s.integers()
    if cfg.format == "json":
        return _dumps({"G": _group_label(G), "q": ctx.q,
                       "constraint": cfg.constraint().normalized(G, ctx).to_dict(),
                       "coefficients": {str(D): str(v) for D, v in enumerate(vals)}})
    return _tsv(["D", "coefficient"], enumerate(vals))


def _elementary(G: GroupSpec) -> tuple[int, int]:
    from .ffield import is_prime
    rs = set(G.invariant_factors)
    if len(rs) != 1 or not is_prime(next(iter(rs))):
        raise ConfigError("predict needs an elementary abelian group (Z/Q)^n")
    return next(iter(rs)), G.n


def cmd_predict(cfg: JobConfig) -> str:
    from .asymptotics import conductor, leading_coeff_full, leading_coeff_kE, main_term
    G, ctx = cfg.group_spec(), cfg.field_ctx()
    Q, n = _elementary(G)
    q = ctx.q
    full = leading_coeff_full(Q, n, q, cfg.cutoff)
    Lv, Le = full.L
    ell = len(cfg.points)
    out = {"G": _group_label(G), "q": q,
           "constants": {"full": full.to_dict(),
                         "kE": leading_coeff_kE(Q, n, q, ell, cfg.cutoff).to_dict(), "ell": ell},
           "terms": []}
    for g in cfg.genus:
        D = conductor(Q, n, g)
        mt = main_term(Q, n, q, g, cfg.cutoff)
        out["terms"].append({"g": g, "D": str(D), "main_term": mt,
                             "main_term_error": mt * Le / Lv if Lv else 0.0})
    if cfg.format == "tsv":
        return _tsv(["g", "D", "main_term", "main_term_error"],
                    [(t["g"], t["D"], repr(t["main_term"]), repr(t["main_term_error"])) for t in out["terms"]])
    return _dumps(out)


def cmd_distribution(cfg: JobConfig) -> str:
    from .asymptotics import histogram_mean, sum_law, tv_distance
    from .census import point_count_histogram
    G, ctx = cfg.group_spec(), cfg.field_ctx()
    Q, n = _elementary(G)
    law = sum_law(Q, n, ctx.q)
    records = []
    for g in _need_genus(cfg):
        hist = point_count_histogram(G, ctx, g, workers=cfg.threads, budget=cfg.budget)
        records.append((g, hist, tv_distance(hist, law), histogram_mean(hist)))
    if cfg.format == "json":
        return _dumps([{"G": _group_label(G), "q": ctx.q, "g": g,
                        "histogram": {str(M): str(c) for M, c in hist.items()},
                        "law": {str(M): str(p) for M, p in law.items()},
                        "tv": str(tv), "tv_float": float(tv), "mean": str(mean)}
                       for g, hist, tv, mean in records])
    rows = []
    for g, hist, tv, _ in records:
        total = sum(hist.values())
        for M in sorted(set(hist) | set(law)):
            p = law.get(M, Fraction(0))
            emp = Fraction(hist.get(M, 0), total)
            rows.append((g, M, hist.get(M, 0), emp, p, repr(float(p)), str(tv)))
    return _tsv(["g", "M", "count", "empirical", "probability", "probability_float", "tv"], rows)


# -- verify suites

def _suite_mobius(cfg) -> list[str]:
    bad = []
    for G in all_group_shapes(cfg.max_order):
        want = 1 if G.is_trivial() else 0
        got = mobius_identity_check(G)
        if got != want:
            bad.append(f"mobius sum {got} != {want} for {_group_label(G) or '1'}")
    return bad


def _suite_groups(cfg) -> list[str]:
    rng = random.Random(cfg.seed)
    shapes = [G for G in all_group_shapes(min(cfg.max_order, 128)) if not G.is_trivial()]
    bad = []
    for G in rng.sample(shapes, min(20, len(shapes))):
        if sum(phi(G, s) for s in range(1, G.exponent + 1) if G.exponent % s == 0) != G.order:
            bad.append(f"phi does not sum to |G| for {_group_label(G)}")
        for v in G.elements():
            m, x = 1, v
            while any(x):
                x, m = G.add(x, v), m + 1
            if m != element_order(G, v):
                bad.append(f"order of {v} in {_group_label(G)}")
                break
    for Q in (2, 3, 5):
        if len(subgroups(GroupSpec((Q, Q)))) != Q + 3:
            bad.append(f"(Z/{Q})^2 subgroup count")
    return bad


def _suite_census(cfg) -> list[str]:
    from .census import count_H_star
    from .ffield import make_field
    bad = []
    for G, ctx, gs in ((GroupSpec((2,)), make_field(3), (0, 1, 2)),
                       (GroupSpec((2, 2)), make_field(5), (0, 1)),
                       (GroupSpec((3,)), make_field(7), (1, 2))):
        for g in gs:
            vals = {pth: count_H_star(G, ctx, g, path=pth, budget=cfg.budget)
                    for pth in ("direct", "mobius", "abstract", "series")}
            if len(set(vals.values())) != 1:
                bad.append(f"{_group_label(G)} q={ctx.q} g={g}: {vals}")
    return bad


def _suite_zeta(cfg) -> list[str]:
    from .covers import KummerCover, true_genus, zeta_numerator
    from .ffield import make_field
    from .polyring import enumerate_monic_squarefree
    ctx = make_field(3)
    G = GroupSpec((2,))
    bad = []
    for d in range(1, 7):
        for F in list(enumerate_monic_squarefree(ctx, d))[:6]:
            for a in (0, 1):
                c = KummerCover(G, (F,), (a,))
                try:
                    P = zeta_numerator(c)
                except VerificationError as exc:
                    bad.append(str(exc))
                    continue
                if len(P) - 1 != 2 * true_genus(c):
                    bad.append(f"degree of L-polynomial for {F}")
    return bad


_SUITES = {"mobius": _suite_mobius, "groups": _suite_groups, "census": _suite_census,
           "zeta": _suite_zeta}


def cmd_verify(cfg: JobConfig) -> str:
    names = list(_SUITES) if cfg.suite == "all" else [cfg.suite]
    report, failures = {}, []
    for name in names:
        bad = _SUITES[name](cfg)
        report[name] = "PASS" if not bad else "FAIL"
        failures += [f"{name}: {msg}" for msg in bad]
    text = _dumps({"suites": report, "failures": failures})
    if failures:
        raise VerificationError(text)
    return text


COMMANDS = {"census": cmd_census, "strata": cmd_strata, "series": cmd_series,
            "predict": cmd_predict, "distribution": cmd_distribution, "verify": cmd_verify}


def run(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        text = COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 4
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
