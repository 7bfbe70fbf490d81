"""Command-line front end: value tables, tensor evaluation, and the
cross-engine verification suite, with machine-readable reports.

Exit codes: 0 success, 1 verification/agreement failure, 2 usage or
input error.
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

import mpmath

from .analytic import (
    CurveParams,
    basis_values,
    ell_integral,
    i_q0_table,
    iter_ab_closed,
    period_a,
    period_b,
    t,
)
from .combinat import kappa, kappa_prime, psi
from .homology import (
    HTensor,
    NotInKError,
    k_basis,
    random_k_tensor,
    third_factors,
)
from .quadrature import (
    ChenIntegrator,
    FormSpec,
    PathWord,
    QuadratureError,
    a_word,
    b_word,
    loop_word,
)

EXACT_ENGINES = ("combinatorial", "composed", "table")
ALL_ENGINES = EXACT_ENGINES + ("numeric",)
MAX_G_EXACT = 8
MAX_G_NUMERIC = 3


@dataclass
class RunConfig:
    """Validated run parameters shared by all subcommands."""

    g: int
    nu: object  # int or "all"
    engines: tuple
    precision: int = 128
    tol_line: str = "1e-10"
    tol_iterated: str = "1e-8"
    tol_modz: str = "1e-5"
    fmt: str = "json"
    seed: int = 0
    out: str = None

    def __post_init__(self):
        if not 2 <= self.g <= MAX_G_EXACT:
            raise ValueError(f"g must be in [2, {MAX_G_EXACT}]")
        if "numeric" in self.engines and self.g > MAX_G_NUMERIC:
            raise ValueError(
                f"the numeric engine supports g <= {MAX_G_NUMERIC}"
            )
        if self.nu != "all" and not 0 <= self.nu <= 2 * self.g + 1:
            raise ValueError(f"nu must be in [0, {2 * self.g + 1}] or 'all'")
        unknown = set(self.engines) - set(ALL_ENGINES)
        if unknown:
            raise ValueError(f"unknown engines: {sorted(unknown)}")
        if self.precision < 53:
            raise ValueError("precision must be at least 53 bits")
        if self.fmt not in ("json", "markdown", "csv"):
            raise ValueError(f"unknown format {self.fmt!r}")

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "nu": self.nu,
            "engines": list(self.engines),
            "precision": self.precision,
            "tol_line": self.tol_line,
            "tol_iterated": self.tol_iterated,
            "tol_modz": self.tol_modz,
            "format": self.fmt,
            "seed": self.seed,
        }

    @property
    def nus(self) -> list:
        if self.nu == "all":
            return list(range(2 * self.g + 2))
        return [self.nu]


def _fraction_str(v: Fraction) -> str:
    return str(Fraction(v))


def _sym_str(sym) -> str:
    return f"{sym[0]}{sym[1]}"


def _make_integrator(cfg: RunConfig, params: CurveParams) -> ChenIntegrator:
    return ChenIntegrator(params, precision=cfg.precision)


class _Suite:
    """Accumulates cases, failures, and the largest observed error."""

    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.failures = []
        self.max_error = 0.0
        self._start = time.time()

    def exact(self, case: str, ok: bool, detail: str = ""):
        self.cases += 1
        if not ok:
            self.failures.append({"case": case, "detail": detail})

    def within(self, case: str, error, bound) -> None:
        self.cases += 1
        error = float(error)
        self.max_error = max(self.max_error, error)
        if not error <= float(bound):
            self.failures.append(
                {"case": case, "detail": f"error {error} exceeds {bound}"}
            )

    def broken(self, case: str, exc: Exception) -> None:
        self.cases += 1
        self.failures.append({"case": case, "detail": str(exc)})

    def report(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "max_error": self.max_error,
            "seconds": round(time.time() - self._start, 3),
        }


# ---------------------------------------------------------------------------
# table


def cmd_table(cfg: RunConfig) -> tuple:
    params = CurveParams(cfg.g)
    integrator = (
        _make_integrator(cfg, params) if "numeric" in cfg.engines else None
    )
    tol_modz = mpmath.mpf(cfg.tol_modz)
    suites = []
    for nu in cfg.nus:
        suite = _Suite(f"table nu={nu}")
        exact_cols = {
            eng: basis_values(cfg.g, nu, eng)
            for eng in cfg.engines
            if eng in ("composed", "table")
        }
        rows = []
        for idx, elem in enumerate(k_basis(cfg.g)):
            for third in third_factors(cfg.g):
                A = elem.tensor.tensor(third)
                values = {}
                exacts = set()
                for eng in cfg.engines:
                    if eng == "combinatorial":
                        frac = kappa(A, nu).as_fraction()
                    elif eng in exact_cols:
                        frac = exact_cols[eng][(idx, third)]
                    else:
                        continue
                    values[eng] = _fraction_str(frac)
                    exacts.add(frac)
                agree = len(exacts) <= 1
                if "numeric" in cfg.engines:
                    try:
                        val, dist = integrator.numeric_harmonic_volume(
                            A, nu, cfg.tol_iterated
                        )
                        values["numeric"] = {
                            "value": float(val),
                            "lattice_distance": float(dist),
                        }
                        if exacts:
                            ref = next(iter(exacts))
                            err = abs(
                                val - mpmath.mpf(ref.numerator) / ref.denominator
                            )
                            err = min(err, 1 - err)
                            agree = agree and err <= tol_modz
                    except QuadratureError as exc:
                        values["numeric"] = {"error": str(exc)}
                        agree = False
                row = {
                    "element": elem.label,
                    "third": _sym_str(third),
                    "values": values,
                    "agree": agree,
                }
                rows.append(row)
                suite.exact(
                    f"{elem.label} (x) {_sym_str(third)}",
                    agree,
                    json.dumps(values),
                )
        out = suite.report()
        out["nu"] = nu
        out["rows"] = rows
        suites.append(out)
    code = 0 if all(not s["failures"] for s in suites) else 1
    return suites, code


def _render_table_markdown(report: dict) -> str:
    lines = []
    for suite in report["suites"]:
        engines = report["config"]["engines"]
        lines.append(f"## {suite['name']}")
        lines.append("")
        header = ["element", "third"] + list(engines) + ["agree"]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        for row in suite["rows"]:
            cells = [row["element"], row["third"]]
            for eng in engines:
                v = row["values"].get(eng, "")
                if isinstance(v, dict):
                    v = v.get("error") or f"{v['value']:.6f}"
                cells.append(str(v))
            cells.append("yes" if row["agree"] else "NO")
            lines.append("| " + " | ".join(cells) + " |")
        lines.append("")
    return "\n".join(lines)


def _render_table_csv(report: dict) -> str:
    buf = io.StringIO()
    engines = report["config"]["engines"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["nu", "element", "third"] + list(engines) + ["agree"])
    for suite in report["suites"]:
        for row in suite["rows"]:
            cells = [suite["nu"], row["element"], row["third"]]
            for eng in engines:
                v = row["values"].get(eng, "")
                if isinstance(v, dict):
                    v = v.get("error") or repr(v["value"])
                cells.append(v)
            cells.append(int(row["agree"]))
            writer.writerow(cells)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# eval


def cmd_eval(cfg: RunConfig, tensor_path: str) -> tuple:
    try:
        with open(tensor_path) as fh:
            text = fh.read()
        obj = json.loads(text)
    except OSError as exc:
        raise SystemExit2(f"cannot read tensor file: {exc}")
    except json.JSONDecodeError as exc:
        raise SystemExit2(
            f"parse error in {tensor_path} at line {exc.lineno} "
            f"column {exc.colno}: {exc.msg}"
        )
    try:
        A = HTensor.from_json_obj(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise SystemExit2(f"bad tensor file: {exc}")
    if A.genus != cfg.g:
        raise SystemExit2(
            f"tensor genus {A.genus} does not match --g {cfg.g}"
        )
    try:
        params = CurveParams(cfg.g)
        integrator = (
            _make_integrator(cfg, params) if "numeric" in cfg.engines else None
        )
        suites = []
        for nu in cfg.nus:
            suite = _Suite(f"eval nu={nu}")
            values = {}
            exacts = set()
            if "combinatorial" in cfg.engines:
                frac = kappa(A, nu).as_fraction()
                values["kappa"] = _fraction_str(frac)
                values["kappa_prime"] = str(kappa_prime(A, nu))
                exacts.add(frac)
                suite.exact(
                    "kappa = kappa_prime",
                    values["kappa"] == values["kappa_prime"],
                    json.dumps(values),
                )
            from .analytic import harmonic_volume

            for eng in ("composed", "table"):
                if eng in cfg.engines:
                    frac = harmonic_volume(A, nu, params, eng).value
                    values[eng] = _fraction_str(frac)
                    exacts.add(frac)
            suite.exact(
                "exact engines agree", len(exacts) <= 1, json.dumps(values)
            )
            if "numeric" in cfg.engines:
                try:
                    val, dist = integrator.numeric_harmonic_volume(
                        A, nu, cfg.tol_iterated
                    )
                    values["numeric"] = {
                        "value": float(val),
                        "lattice_distance": float(dist),
                    }
                    if exacts:
                        ref = next(iter(exacts))
                        err = abs(
                            val - mpmath.mpf(ref.numerator) / ref.denominator
                        )
                        suite.within(
                            "numeric matches exact mod 1",
                            min(err, 1 - err),
                            cfg.tol_modz,
                        )
                except QuadratureError as exc:
                    suite.broken("numeric evaluation", exc)
            out = suite.report()
            out["nu"] = nu
            out["values"] = values
            suites.append(out)
    except NotInKError as exc:
        raise SystemExit2(str(exc))
    code = 0 if all(not s["failures"] for s in suites) else 1
    return suites, code


# ---------------------------------------------------------------------------
# verify


def _verify_exact(cfg: RunConfig, suites: list) -> None:
    g = cfg.g
    rng = random.Random(cfg.seed)
    want_kappa = "combinatorial" in cfg.engines
    engines = [e for e in ("composed", "table") if e in cfg.engines]

    suite = _Suite("exact basis sweep")
    for nu in range(2 * g + 2):
        cols = {eng: basis_values(g, nu, eng) for eng in engines}
        for idx, elem in enumerate(k_basis(g)):
            for third in third_factors(g):
                vals = {eng: cols[eng][(idx, third)] for eng in engines}
                if want_kappa:
                    vals["kappa"] = kappa(
                        elem.tensor.tensor(third), nu
                    ).as_fraction()
                suite.exact(
                    f"nu={nu} {elem.label} (x) {_sym_str(third)}",
                    len(set(vals.values())) <= 1,
                    str({k: str(v) for k, v in vals.items()}),
                )
    suites.append(suite.report())

    from .analytic import harmonic_volume

    params = CurveParams(g)
    suite = _Suite("exact random sweep")
    tensors = [random_k_tensor(g, rng) for _ in range(100)]
    for n, A in enumerate(tensors):
        for nu in range(2 * g + 2):
            vals = {eng: harmonic_volume(A, nu, params, eng).value for eng in engines}
            if want_kappa:
                vals["kappa"] = kappa(A, nu).as_fraction()
            suite.exact(
                f"tensor {n} nu={nu}",
                len(set(vals.values())) <= 1,
                str({k: str(v) for k, v in vals.items()}),
            )
    suites.append(suite.report())

    if want_kappa:
        suite = _Suite("kappa agreement with branch-basis count")
        for n, A in enumerate(tensors):
            for nu in range(2 * g + 2):
                suite.exact(
                    f"tensor {n} nu={nu}",
                    kappa(A, nu) == kappa_prime(A, nu),
                )
        suites.append(suite.report())

    suite = _Suite("counting functional kills the basis relation")
    indices = list(range(2 * g + 2))
    for nu in indices:
        others = [p for p in indices if p != nu]
        for j in others:
            for k in others:
                for slot in range(3):
                    total = 0
                    for p in others:
                        triple = [j, k]
                        triple.insert(slot, p)
                        total += psi(*triple, nu)
                    suite.exact(
                        f"nu={nu} j={j} k={k} slot={slot}",
                        total % 2 == 0,
                        f"sum = {total}",
                    )
    suites.append(suite.report())

    suite = _Suite("power-sum identities")
    params = CurveParams(g)
    N = params.N
    for u in range(-N, 2 * N + 1):
        power_sum = sum(
            (params.zeta_pow(u * p) for p in range(1, g + 1)),
            params.zeta_pow(0) * 0,
        )
        suite.exact(f"t({u}) equals its power sum", t(u, params) == power_sum)
        if u % 2:
            suite.exact(f"t({-u}) = -t({u})", t(-u, params) == -t(u, params))
            suite.exact(
                f"Re t({u}) = 0", t(u, params).real_part().is_zero()
            )
    suites.append(suite.report())


def _verify_numeric(cfg: RunConfig, suites: list) -> None:
    g = cfg.g
    params = CurveParams(g)
    integrator = _make_integrator(cfg, params)
    rng = random.Random(cfg.seed)
    prec = cfg.precision

    suite = _Suite("numeric periods")
    try:
        for i in range(1, g + 1):
            for j in range(1, g + 1):
                for which, word, exact in (
                    ("a", a_word(j), period_a(i, j, params)),
                    ("b", b_word(j), period_b(i, j, params)),
                ):
                    num = integrator.word_line_integral(
                        word, FormSpec("omega", i), cfg.tol_line
                    )
                    suite.within(
                        f"int_{which}{j} omega{i}",
                        abs(num - exact.embed(prec)),
                        "1e-8",
                    )
    except QuadratureError as exc:
        suite.broken("period quadrature", exc)
    suites.append(suite.report())

    suite = _Suite("numeric base-point path integrals")
    try:
        for nu in range(2 * g + 2):
            for kind in ("alpha", "beta"):
                for i in range(1, g + 1):
                    num = integrator.ell_line_integral(
                        nu, FormSpec(kind, i), cfg.tol_line
                    )
                    exact = ell_integral(kind, i, nu, params)
                    suite.within(
                        f"int_ell{nu} {kind}{i}",
                        abs(num - mpmath.mpf(exact.numerator) / exact.denominator),
                        "1e-8",
                    )
    except QuadratureError as exc:
        suite.broken("path quadrature", exc)
    suites.append(suite.report())

    suite = _Suite("numeric iterated integrals")
    for i in range(1, g + 1):
        for j in range(1, g + 1):
            for k in range(1, g + 1):
                for loop in ("a", "b"):
                    word = a_word(k) if loop == "a" else b_word(k)
                    try:
                        num = integrator.word_iterated_integral(
                            word,
                            FormSpec("alpha", i),
                            FormSpec("beta", j),
                            cfg.tol_iterated,
                        )
                        exact = iter_ab_closed(i, j, k, loop, params)
                        suite.within(
                            f"int_{loop}{k} alpha{i} beta{j}",
                            abs(num - exact.embed(prec).real),
                            "1e-6",
                        )
                    except QuadratureError as exc:
                        suite.broken(
                            f"int_{loop}{k} alpha{i} beta{j}", exc
                        )
    suites.append(suite.report())

    suite = _Suite("numeric pointed volumes on low-case basis elements")
    for elem in k_basis(g):
        if elem.case not in (1, 2):
            continue
        for third in third_factors(g):
            case = f"{elem.label} (x) {_sym_str(third)}"
            try:
                val, _, _ = integrator.numeric_harmonic_volume_q0(
                    elem.tensor.tensor(third), cfg.tol_iterated
                )
                exact = i_q0_table(elem, third, params).value
                err = abs(val - mpmath.mpf(exact.numerator) / exact.denominator)
                suite.within(case, min(err, 1 - err), cfg.tol_modz)
            except QuadratureError as exc:
                suite.broken(case, exc)
    suites.append(suite.report())

    suite = _Suite("iterated-integral algebra")
    forms = [FormSpec(kind, i) for kind in ("alpha", "beta") for i in range(1, g + 1)]
    try:
        for k in range(1, g + 1):
            for word_name, word in ((f"a{k}", a_word(k)), (f"b{k}", b_word(k))):
                f1, f2 = rng.sample(forms, 2)
                shuffle = (
                    integrator.word_iterated_integral(word, f1, f2, cfg.tol_iterated)
                    + integrator.word_iterated_integral(word, f2, f1, cfg.tol_iterated)
                    - integrator.word_line_integral(word, f1, cfg.tol_line)
                    * integrator.word_line_integral(word, f2, cfg.tol_line)
                )
                suite.within(f"shuffle on {word_name}", abs(shuffle), "1e-9")
                rev = integrator.word_iterated_integral(
                    word.inverse(), f1, f2, cfg.tol_iterated
                ) - integrator.word_iterated_integral(word, f2, f1, cfg.tol_iterated)
                suite.within(f"reversal on {word_name}", abs(rev), "1e-8")
        for j in (0, 1):
            triv = PathWord([(j, False, False), (j, False, True)])
            f1, f2 = rng.sample(forms, 2)
            suite.within(
                f"null word e{j} e{j}^-1, line",
                abs(integrator.word_line_integral(triv, f1, cfg.tol_line)),
                "1e-10",
            )
            suite.within(
                f"null word e{j} e{j}^-1, iterated",
                abs(
                    integrator.word_iterated_integral(
                        triv, f1, f2, cfg.tol_iterated
                    )
                ),
                "1e-10",
            )
    except QuadratureError as exc:
        suite.broken("algebra checks", exc)
    suites.append(suite.report())


def cmd_verify(cfg: RunConfig) -> tuple:
    suites = []
    if any(e in cfg.engines for e in EXACT_ENGINES):
        _verify_exact(cfg, suites)
    if "numeric" in cfg.engines:
        _verify_numeric(cfg, suites)
    code = 0 if all(not s["failures"] for s in suites) else 1
    return suites, code


def _render_summary_markdown(report: dict) -> str:
    lines = [
        "| suite | cases | failures | max_error | seconds |",
        "|---|---|---|---|---|",
    ]
    for s in report["suites"]:
        lines.append(
            f"| {s['name']} | {s['cases']} | {len(s['failures'])} "
            f"| {s['max_error']} | {s['seconds']} |"
        )
    for s in report["suites"]:
        for f in s["failures"]:
            lines.append(f"FAIL [{s['name']}] {f['case']}: {f['detail']}")
    return "\n".join(lines) + "\n"


def _render_summary_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["suite", "cases", "failures", "max_error", "seconds"])
    for s in report["suites"]:
        writer.writerow(
            [s["name"], s["cases"], len(s["failures"]), s["max_error"], s["seconds"]]
        )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# plumbing


class SystemExit2(Exception):
    """Usage or input error: reported on stderr, exit code 2."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmvol",
        description=(
            "Pointed harmonic volumes of the hyperelliptic curves "
            "w^2 = z^(2g+2) - 1 at branch points, by exact closed forms, "
            "mod-2 counting, and numeric iterated integrals."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, descr in (
        ("table", "tabulate values on every canonical basis element"),
        ("eval", "evaluate the engines on a tensor from a JSON file"),
        ("verify", "run the cross-engine verification suites"),
    ):
        p = sub.add_parser(name, help=descr)
        p.add_argument("--g", type=int, default=2, help="genus (default 2)")
        p.add_argument(
            "--nu",
            default="all",
            help="branch-point index, or 'all' (default)",
        )
        p.add_argument(
            "--engines",
            default=None,
            help=(
                "comma list from {combinatorial, composed, table, numeric}; "
                "'exact' = first three, 'all' = every engine "
                "(default: exact; verify defaults to all when g allows)"
            ),
        )
        p.add_argument("--precision", type=int, default=128)
        p.add_argument("--tol-line", default="1e-10")
        p.add_argument("--tol-iterated", default="1e-8")
        p.add_argument("--tol-modz", default="1e-5")
        p.add_argument(
            "--format", default="json", choices=("json", "markdown", "csv")
        )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="write the report here")
        if name == "eval":
            p.add_argument("tensor_file", help="tensor in the JSON schema")
    return parser


def _parse_engines(raw: str, command: str, g: int) -> tuple:
    if raw is None:
        if command == "verify" and g <= MAX_G_NUMERIC:
            return ALL_ENGINES
        return EXACT_ENGINES
    names = []
    for piece in raw.split(","):
        piece = piece.strip()
        if piece == "all":
            names.extend(ALL_ENGINES)
        elif piece == "exact":
            names.extend(EXACT_ENGINES)
        elif piece:
            names.append(piece)
    seen = dict.fromkeys(names)
    return tuple(seen)


def _config_from_args(args) -> RunConfig:
    nu = args.nu
    if nu != "all":
        try:
            nu = int(nu)
        except ValueError:
            raise SystemExit2(f"--nu must be an integer or 'all', got {nu!r}")
    return RunConfig(
        g=args.g,
        nu=nu,
        engines=_parse_engines(args.engines, args.command, args.g),
        precision=args.precision,
        tol_line=args.tol_line,
        tol_iterated=args.tol_iterated,
        tol_modz=args.tol_modz,
        fmt=args.format,
        seed=args.seed,
        out=args.out,
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except (ValueError, SystemExit2) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "table":
            suites, code = cmd_table(cfg)
        elif args.command == "eval":
            suites, code = cmd_eval(cfg, args.tensor_file)
        else:
            suites, code = cmd_verify(cfg)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {"version": 1, "config": cfg.as_dict(), "suites": suites}
    if cfg.fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    elif cfg.fmt == "markdown":
        text = (
            _render_table_markdown(report)
            if args.command == "table"
            else _render_summary_markdown(report)
        )
    else:
        text = (
            _render_table_csv(report)
            if args.command == "table"
            else _render_summary_csv(report)
        )
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
