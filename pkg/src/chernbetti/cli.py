"""Command-line entry point: ``chernbetti <command> [options]``.

Exit status: 0 when every check passes, 1 when a mathematical check fails,
2 on bad usage or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import charclass, hilbert, invariants, manifolds, moduli
from .core import ExactArithmeticError
from .report import Report
from .symmetric import (
    DEFAULT_MAX_DIMENSION,
    DIMENSION_CEILING,
    ChernPoly,
    check_dimension,
    monomial_key,
    substitute,
)

FORMATS = ("table", "json", "csv", "latex")
SUITES = ("lemmas", "theorems", "hilbert", "moduli", "holonomy", "all")

INPUT_ERRORS = (
    ValueError,
    KeyError,
    TypeError,
    ArithmeticError,
    OSError,
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    n_max: int = DEFAULT_MAX_DIMENSION
    fmt: str = "table"
    fixtures: str | None = None

    def __post_init__(self):
        if not 1 <= self.n_max <= DIMENSION_CEILING:
            raise UsageError(f"--n-max must lie in 1..{DIMENSION_CEILING}, got {self.n_max}")
        if self.fmt not in FORMATS:
            raise UsageError(f"unknown format {self.fmt!r}")


# ---------------------------------------------------------------------------
# output helpers


def exact(x):
    """JSON-friendly exact value: ints stay ints, other rationals become 'p/q'."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    return x


def parse_exact(s) -> Fraction:
    return Fraction(s)


def dump_json(obj) -> str:
    return json.dumps(exact(obj), indent=2)


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _latex_escape(s: str) -> str:
    return s.replace("_", r"\_").replace("^", r"\^{}").replace("#", r"\#").replace("%", r"\%")


def render_reports(reports: list[Report], fmt: str) -> str:
    if fmt == "json":
        return dump_json([r.to_dict() for r in reports])
    if fmt == "csv":
        rows = [("report", "check", "status", "detail")]
        rows += [(r.title, c.name, c.status, c.detail) for r in reports for c in r.checks]
        return _csv(rows)
    if fmt == "latex":
        lines = [r"\begin{tabular}{lll}", r"report & check & status \\ \hline"]
        for r in reports:
            for c in r.checks:
                lines.append(f"{_latex_escape(r.title)} & {_latex_escape(c.name)} & {c.status} \\\\")
        lines.append(r"\end{tabular}")
        return "\n".join(lines)
    return "\n".join(r.render() for r in reports)


def summary(reports: list[Report]) -> tuple[int, int, int]:
    checks = [c for r in reports for c in r.checks]
    fails = sum(c.status == "FAIL" for c in checks)
    warns = sum(c.status == "WARN" for c in checks)
    return len(checks), fails, warns


# ---------------------------------------------------------------------------
# kclass


def parse_subst(items, n: int) -> dict:
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        name = name.strip()
        if not sep or not name.startswith("c") or not name[1:].isdigit():
            raise UsageError(f"bad substitution {item!r}; expected e.g. c1=0")
        k = int(name[1:])
        if not 1 <= k <= n:
            raise UsageError(f"substitution {item!r} names c{k} outside c1..c{n}")
        try:
            out[k] = Fraction(val.strip())
        except ValueError:
            raise UsageError(f"bad value in substitution {item!r}") from None
    return out


def cmd_kclass(args, cfg: RunConfig) -> int:
    n, k = args.n, args.k
    check_dimension(n, DIMENSION_CEILING)
    if not 0 <= k <= n:
        raise UsageError(f"--k must lie in 0..{n}")
    p = charclass.kclass(n, k)
    subst = parse_subst(args.subst, n)
    if subst:
        p = substitute(p, subst)
    reports = [charclass.verify_kclass_lemmas(n)] if args.verify else []
    if cfg.fmt == "json":
        out = {"n": n, "k": k, "subst": {f"c{i}": v for i, v in subst.items()}, "class": p.render()}
        out["terms"] = {monomial_key(e[:-1]): c for e, c in p.sorted_terms()}
        if reports:
            out["verify"] = [r.to_dict() for r in reports]
        print(dump_json(out))
    elif cfg.fmt == "csv":
        print(_csv([("monomial", "coefficient")] + [(monomial_key(e[:-1]), str(c)) for e, c in p.sorted_terms()]))
    elif cfg.fmt == "latex":
        print(p.latex())
    else:
        print(p.render())
        if reports:
            print(render_reports(reports, "table"))
    return 0 if all(r.passed for r in reports) else 1


def kclass_from_json(text: str) -> ChernPoly:
    data = json.loads(text)
    return ChernPoly.parse(data["class"], data["n"])


# ---------------------------------------------------------------------------
# hilb / sym


def load_surface(spec: str) -> tuple[str, hilbert.SurfaceBetti]:
    if spec.lower() in hilbert.PRESETS:
        return spec.lower(), hilbert.surface(spec)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"{spec!r} is neither a preset {sorted(hilbert.PRESETS)} nor a file")
    data = json.loads(path.read_text())
    betti = data["betti"] if isinstance(data, dict) else data
    if len(betti) != 5:
        raise invariants.InvalidDataError(f"a surface needs 5 Betti numbers, got {len(betti)}")
    return path.stem, hilbert.SurfaceBetti(*(int(b) for b in betti)).validate_connected()


def betti_summary(P: invariants.PoincarePoly) -> dict:
    out = {"d": P.d, "betti": list(P.betti), "euler": P.euler, "Phi": invariants.phi_cap(P)}
    out["Phi_constrained"] = invariants.phi_cap_applicable(P)
    out["phi"] = invariants.phi_small(P) if P.euler else None
    return out


def print_betti(title: str, info: dict, fmt: str) -> None:
    if fmt == "json":
        print(dump_json({"title": title, **info}))
    elif fmt == "csv":
        rows = [("j", "b_j")] + [(j, b) for j, b in enumerate(info["betti"])]
        rows += [("e", info["euler"]), ("Phi", exact(info["Phi"])), ("phi", exact(info["phi"]))]
        print(_csv(rows))
    elif fmt == "latex":
        from .core import UniPoly

        poly = UniPoly(info["betti"]).render("t").replace("*", "")
        print(f"P(t) = {poly}")
        print(f"e = {info['euler']},\\quad \\Phi = {exact(info['Phi'])},\\quad \\varphi = {exact(info['phi'])}")
    else:
        print(title)
        width = max(len(str(b)) for b in info["betti"])
        for j, b in enumerate(info["betti"]):
            print(f"  b{j:<3}{b:>{width}}")
        print(f"  e    = {info['euler']}")
        flag = "" if info["Phi_constrained"] else " (d not divisible by 4)"
        print(f"  Phi  = {exact(info['Phi'])}{flag}")
        print(f"  phi  = {exact(info['phi']) if info['phi'] is not None else 'undefined (e = 0)'}")


def cmd_hilb(args, cfg: RunConfig, sym: bool = False) -> int:
    name, S = load_surface(args.surface)
    fn = hilbert.sym_product_poincare if sym else hilbert.hilb_poincare
    P = fn(S, args.m, cap=args.cap)
    title = f"{name}^({args.m})" if sym else f"{name}^[{args.m}]"
    print_betti(title, betti_summary(P), cfg.fmt)
    return 0


# ---------------------------------------------------------------------------
# verify


def suite_lemmas(n_max: int) -> list[Report]:
    out = []
    for n in range(2, n_max + 1):
        out.append(charclass.verify_kclass_lemmas(n))
    rep = Report("K-class structure")
    for n in range(1, n_max + 1):
        c = ChernPoly.gen(n, n)
        rep.add(f"K({n},0) = c{n}", charclass.kclass(n, 0) == c, topic="lemmas")
        rep.add(f"K({n},1) = (n/2) c{n}", charclass.kclass(n, 1) == c * Fraction(n, 2), topic="lemmas")
        rep.add(
            f"K({n},{n}) is the top Todd class",
            charclass.kclass(n, n) == charclass.todd_class(n).homogeneous(n),
            topic="lemmas",
        )
        bad = [k for k in range(1, n + 1) if not charclass.verify_ideal_membership(n, k)]
        rep.add(f"ideal membership of K({n},k)", not bad, f"fails for k={bad}" if bad else "", topic="lemmas")
        for j in range((n - 1) // 2 + 1):
            if 2 * j + 1 <= n:
                sol = charclass.odd_order_combination(n, j)
                rep.add(f"K({n},{2 * j + 1}) lies in the span of even orders", sol is not None, topic="lemmas")
    out.append(rep)
    out.append(charclass.todd_weight3_report())
    return out


def suite_theorems(n_max: int, seed: int = 0, samples: int = 100) -> list[Report]:
    out = []
    for n in range(2, n_max + 1):
        out.append(charclass.theorem2_identity(n))
    for n in range(4, n_max + 1):
        out.append(charclass.theorem3_identity(n))
    if n_max >= 4:
        rep = Report("top Todd class at c1 = 0, n=4")
        c = lambda k: ChernPoly.gen(k, 4)  # noqa: E731
        td = substitute(charclass.todd_class(4).homogeneous(4), {1: 0})
        want = (c(2) ** 2 * 3 - c(4)) / 720
        rep.add("td_4 = (3 c2^2 - c4)/720", td == want, td.render(), topic="theorems")
        out.append(rep)
    m_lim = min(n_max, 6)
    gens = [(f"CP^{n}", manifolds.cp_chern(n)) for n in range(1, m_lim + 1)]
    gens += [
        (f"CI{degs} in CP^{N}", manifolds.complete_intersection_chern(N, degs))
        for N, degs in calabi_yau_intersections(m_lim)
    ]
    for name, data in gens:
        r = manifolds.theorem_checks(data)
        r.title = f"{name}: {r.title}"
        out.append(r)
        r = manifolds.divisibility_suite(data)
        r.title = f"{name}: {r.title}"
        out.append(r)
    out.append(gamma_additivity_report(m_lim))
    rng = random.Random(seed)
    hod = Report(f"Hodge-level Phi identities on {samples} random diamonds per n")
    for n in (2, 3, 4, 6):
        fails, signed_fails, mirror_fails = 0, 0, 0
        for _ in range(samples):
            H = invariants.random_diamond(n, rng)
            rep = invariants.phi_lemma_check(H)
            fails += not rep.checks[0].ok
            if n % 2:
                signed_fails += not rep.checks[1].ok
            else:
                lhs, rhs = invariants.mirror_sum_identity(H)
                mirror_fails += lhs != rhs
        hod.add(f"Phi decomposition, n={n}", fails == 0, f"{fails}/{samples} diamonds fail", topic="hodge")
        if n % 2:
            hod.add(
                f"Phi decomposition with signed correction, n={n}",
                signed_fails == 0,
                f"{signed_fails}/{samples} fail",
                topic="hodge",
            )
        else:
            hod.add(f"mirror-sum identity, n={n}", mirror_fails == 0, f"{mirror_fails}/{samples} fail", topic="hodge")
    out.append(hod)
    return out


def calabi_yau_intersections(n_max: int):
    """``(N, degrees)`` with all degrees >= 2 summing to ``N + 1`` and
    dimension ``N - r`` between 1 and ``n_max``."""

    def parts(total, count, smallest):
        if count == 0:
            if total == 0:
                yield ()
            return
        for d in range(smallest, total // count + 1):
            for rest in parts(total - d, count - 1, d):
                yield (d,) + rest

    out = []
    for n in range(1, n_max + 1):
        for r in range(1, n + 2):
            N = n + r
            out.extend((N, degs) for degs in parts(N + 1, r, 2))
    return out


def gamma_additivity_report(n_max: int) -> Report:
    rep = Report("gamma and psi additivity on products of projective spaces")
    for a in range(1, n_max):
        for b in range(1, n_max - a + 1):
            A, B = manifolds.cp_chern(a), manifolds.cp_chern(b)
            AB = manifolds.product_chern(A, B)
            g = manifolds.gamma(AB)
            want = manifolds.gamma(A) + manifolds.gamma(B)
            rep.add(f"gamma(CP^{a} x CP^{b})", g == want, f"{g} vs {want}", topic="manifolds")
            p, pw = manifolds.psi_of(AB), manifolds.psi_of(A) + manifolds.psi_of(B)
            rep.add(f"psi(CP^{a} x CP^{b})", p == pw, f"{p} vs {pw}", topic="manifolds")
    return rep


def suite_hilbert(fixtures: dict) -> list[Report]:
    fx = fixtures["hilbert_k3"]
    k3 = hilbert.PRESETS["k3"]
    rep = Report("Hilbert schemes of K3: stored values")
    P2 = hilbert.hilb_poincare(k3, 2)
    rep.add("P(K3^[2])", list(P2.betti) == fx["m2_betti"], str(P2.betti), topic="hilbert")
    rep.add("e(K3^[2])", P2.euler == fx["m2_euler"], f"e={P2.euler}", topic="hilbert")
    t = time.perf_counter()
    e8 = hilbert.hilb_euler(k3, 8)
    rep.add(
        "e(K3^[8]), odd",
        e8 == fx["m8_euler"] and e8 % 2 == 1,
        f"e={e8} in {time.perf_counter() - t:.2f}s",
        topic="hilbert",
    )
    for m in range(1, 11):
        got, want = hilbert.hilb_euler(k3, m), hilbert.euler_product_coefficient(24, m)
        rep.add(f"e(K3^[{m}]) matches the eta-product coefficient", got == want, f"{got}", topic="hilbert")
    out = [rep]
    out.append(hilbert.phi_additivity_check(k3, 8, "K3"))
    out.append(hilbert.phi_additivity_check(hilbert.PRESETS["cp2"], 6, "CP2"))
    out.append(hilbert.kummer_fixture_check(fixtures))
    out.append(hilbert.gs_reading_report())
    return out


def suite_moduli(g_max: int, fixtures: dict) -> list[Report]:
    out = []
    seen = set()
    for g in range(2, g_max + 1):
        r = moduli.mg_report(g, fixtures["moduli"]["g3_k64_pairing"])
        # the vanishing-order note is the same for every genus; keep one copy
        r.checks = [c for c in r.checks if c.status != "WARN" or c.name not in seen]
        seen.update(c.name for c in r.checks if c.status == "WARN")
        out.append(r)
    return out


def suite_holonomy(fixtures: dict) -> list[Report]:
    out = []
    g2 = fixtures["g2"]
    rep = Report("G2 Betti lists")
    db2, db3 = g2["smoothing_step"]
    for ex in g2["examples"]:
        P = invariants.PoincarePoly(7, tuple(ex["betti"]), connected=True, closed_oriented=True).validate()
        q = invariants.g2_quantity(P)
        rep.add(f"P'(-1) = 0 for {ex['name']}", q == 0, f"P'(-1)={q}", topic="holonomy")
        b = P.betti
        step = invariants.g2_betti(b[1], b[2] + db2, b[3] + db3)
        rep.add(
            f"smoothing step preserves P'(-1) for {ex['name']}", invariants.g2_quantity(step) == q, topic="holonomy"
        )
    out.append(rep)
    sp = fixtures["spin7"]
    out.append(
        invariants.spin7_report(invariants.PoincarePoly(8, tuple(sp["betti"]), True, True).validate(), sp["b4_minus"])
    )
    qk = fixtures["quaternion_kahler"]
    rep = Report(f"quaternion-Kahler primitive Betti constraint, m={qk['m']}")
    for ex in qk["examples"]:
        v = invariants.qk_constraint(invariants.QKBetti(qk["m"], tuple(ex["beta"])))
        rep.add(f"constraint vanishes on {ex['name']}", v == 0, f"value {v}", topic="holonomy")
    out.append(rep)
    k3 = hilbert.PRESETS["k3"]
    for m in range(1, 5):
        r = invariants.hk_report(hilbert.hilb_poincare(k3, m))
        r.title = f"K3^[{m}]: {r.title}"
        out.append(r)
    return out


def run_suite(name: str, n_max: int, g_max: int, fixtures: dict) -> list[Report]:
    if name == "lemmas":
        return suite_lemmas(n_max)
    if name == "theorems":
        return suite_theorems(n_max)
    if name == "hilbert":
        return suite_hilbert(fixtures)
    if name == "moduli":
        return suite_moduli(g_max, fixtures)
    if name == "holonomy":
        return suite_holonomy(fixtures)
    out = []
    for s in SUITES[:-1]:
        out.extend(run_suite(s, n_max, g_max, fixtures))
    return out


def cmd_verify(args, cfg: RunConfig) -> int:
    if not 2 <= args.g_max <= 8:
        raise UsageError("--g-max must lie in 2..8")
    fixtures = hilbert.load_fixtures(cfg.fixtures)
    t = time.perf_counter()
    reports = run_suite(args.suite, cfg.n_max, args.g_max, fixtures)
    total, fails, warns = summary(reports)
    print(render_reports(reports, cfg.fmt))
    if cfg.fmt == "table":
        elapsed = time.perf_counter() - t
        print(f"{total} checks: {total - fails - warns} passed, {fails} failed, {warns} warnings ({elapsed:.1f}s)")
    return 1 if fails else 0


# ---------------------------------------------------------------------------
# invariants


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def invariants_for_betti(data) -> list[Report]:
    if isinstance(data, list):
        data = {"betti": data}
    betti = tuple(data["betti"])
    P = invariants.PoincarePoly(
        len(betti) - 1,
        betti,
        connected=data.get("connected", True),
        closed_oriented=data.get("closed_oriented", True),
    ).validate()
    rep = Report(f"Betti data, d={P.d}")
    info = betti_summary(P)
    rep.data.update(info)
    rep.add("P'(-1) = -d/2 P(-1)", 2 * P.derivative_at_minus_one(1) == -P.d * P.euler, topic="invariants")
    if P.euler:
        rep.data["log_expansion"] = list(invariants.log_expansion(P, 3).coeffs)
    if P.d % 4 == 0:
        rep.data["fo"] = list(invariants.fo_form(P))
    out = [rep]
    holonomy = data.get("holonomy")
    if holonomy == "hk":
        out.append(invariants.hk_report(P))
    elif holonomy == "g2":
        rep.add("G2: P'(-1) = 0", invariants.g2_quantity(P) == 0, topic="holonomy")
    elif holonomy == "spin7":
        out.append(invariants.spin7_report(P, data.get("b4_minus")))
    elif holonomy is not None:
        raise UsageError(f"unknown holonomy {holonomy!r}; choose hk, g2 or spin7")
    return out


def invariants_for_hodge(data) -> list[Report]:
    H = invariants.HodgeDiamond(int(data["n"]), tuple(tuple(int(v) for v in row) for row in data["h"]))
    H.require_kahler_symmetries()
    P, chi = invariants.hodge_to_poincare(H), invariants.hodge_to_chi(H)
    rep = Report(f"Hodge data, n={H.n}")
    rep.data.update(betti_summary(P))
    rep.data["chi"] = list(chi.coeffs)
    if chi.derivative_at_minus_one(0):
        rep.data["psi"] = invariants.psi(chi)
    rep.data["c1_c(n-1)"] = invariants.theorem2_rhs(chi)
    rep.add("chi Serre symmetry", chi.serre_holds(), topic="invariants")
    out = [rep, invariants.phi_lemma_check(H)]
    if H.n % 2 == 0:
        lhs, rhs = invariants.mirror_sum_identity(H)
        out[0].add("mirror-sum identity", lhs == rhs, f"{lhs} vs {rhs}", topic="hodge")
    return out


def invariants_for_chern(data) -> list[Report]:
    cn = manifolds.ChernNumbers.from_dict(data)
    if not cn.is_complete():
        raise invariants.InvalidDataError("Chern data is missing pairings for some weight-n monomials")
    rep = Report(f"Chern data, n={cn.n}")
    rep.data["euler"] = cn.euler
    if cn.euler:
        rep.data["gamma"] = manifolds.gamma(cn)
    return [rep, manifolds.theorem_checks(cn), manifolds.divisibility_suite(cn)]


def invariants_for_qk(data) -> list[Report]:
    beta = invariants.QKBetti(int(data["m"]), tuple(data["beta"]))
    v = invariants.qk_constraint(beta)
    rep = Report(f"quaternion-Kahler data, m={beta.m}")
    rep.add("primitive Betti constraint vanishes", v == 0, f"value {v}", topic="holonomy")
    rep.data["value"] = v
    return [rep]


def cmd_invariants(args, cfg: RunConfig) -> int:
    handlers = [
        (args.betti, invariants_for_betti),
        (args.hodge, invariants_for_hodge),
        (args.chern, invariants_for_chern),
        (args.qk, invariants_for_qk),
    ]
    reports = []
    for path, fn in handlers:
        if path:
            reports.extend(fn(_read_json(path)))
    if not reports:
        raise UsageError("give at least one of --betti, --hodge, --chern, --qk")
    if cfg.fmt == "table":
        for r in reports:
            print(r.render())
            for k, v in r.data.items():
                print(f"  {k} = {exact(v)}")
    else:
        print(render_reports(reports, cfg.fmt))
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--fixtures", help=f"fixture directory (default ${hilbert.FIXTURE_ENV} or the bundled copy)")

    parser = argparse.ArgumentParser(prog="chernbetti", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kclass", parents=[common], help="expand K(n,k) in Chern classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--subst", action="append", metavar="cK=V", help="substitute a value, e.g. c1=0")
    p.add_argument("--verify", action="store_true", help="also compare with the closed forms")

    for name, helptext in (("hilb", "Betti numbers of S^[m]"), ("sym", "Betti numbers of S^(m)")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--surface", default="k3", help=f"preset {sorted(hilbert.PRESETS)} or JSON file")
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--cap", type=int, default=hilbert.DEFAULT_CAP)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--n-max", type=int, default=DEFAULT_MAX_DIMENSION)
    p.add_argument("--g-max", type=int, default=8)

    p = sub.add_parser("invariants", parents=[common], help="invariants of user-supplied data")
    p.add_argument("--betti", help='JSON: {"betti": [...], "holonomy": "hk|g2|spin7", "b4_minus": n}')
    p.add_argument("--hodge", help='JSON: {"n": n, "h": [[h00, h01, ...], ...]}')
    p.add_argument("--chern", help='JSON: {"n": n, "c1_zero": bool, "pairings": {"c1*c2": v, ...}}')
    p.add_argument("--qk", help='JSON: {"m": m, "beta": [beta_2, ..., beta_2m]}')
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(getattr(args, "n_max", DEFAULT_MAX_DIMENSION), args.format, args.fixtures)
        if args.command == "kclass":
            return cmd_kclass(args, cfg)
        if args.command in ("hilb", "sym"):
            return cmd_hilb(args, cfg, sym=args.command == "sym")
        if args.command == "verify":
            return cmd_verify(args, cfg)
        return cmd_invariants(args, cfg)
    except (UsageError, ExactArithmeticError, *INPUT_ERRORS) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
