"""Command-line entry point: ``mstdlab {enumerate,sample,construct,verify}``.

Exit codes: 0 success, 1 usage error, 2 resource guard, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import construct as cons
from . import enumeration as en
from . import montecarlo as mc
from . import probmodel as pm
from .errors import DomainError, ResourceError
from .probmodel import FringeSpec
from .setcore import imbalance, render, sizes

EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _write_manifest(out: Path, command: str, params: dict, outputs: list[Path], elapsed: float,
                    seed: int | None = None):
    manifest = {
        "command": command,
        "parameters": params,
        "outputs": [str(p) for p in outputs],
        "elapsed_seconds": round(elapsed, 6),
        "version": __version__,
    }
    if seed is not None:
        manifest["seed"] = seed
    path = out.with_name(out.stem + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _parse_filter(text: str, n: int) -> en.Filter:
    if text == "all":
        return en.Filter.all()
    if text == "endpoints":
        return en.Filter.endpoints()
    if text.startswith("fringe:"):
        data = json.loads(Path(text[len("fringe:"):]).read_text())
        spec = FringeSpec.from_json(data)
        if spec.n != n:
            raise DomainError(f"fringe spec has n={spec.n} but --n is {n}")
        return en.Filter.fringed(spec)
    raise UsageError(f"unknown --filter value {text!r}")


def cmd_enumerate(args) -> int:
    flt = _parse_filter(args.filter, args.n)
    start = time.perf_counter()
    hist = en.enumerate_joint(args.n, flt, threads=args.threads)
    elapsed = time.perf_counter() - start
    report = en.tally(hist)
    if args.out:
        out = Path(args.out)
        outputs = list(en.write_census(hist, out, elapsed))
        _write_manifest(out, "enumerate", {"n": args.n, "filter": flt.to_json()}, outputs, elapsed)
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["sum_size", "diff_size", "count"])
        writer.writerows(hist.rows())
    print(f"n={args.n} subsets={report.count} sum_total={report.sum_total} "
          f"diff_total={report.diff_total} classes={report.class_counts}", file=sys.stderr)
    return EXIT_OK


def _emit(payload, out: Path | None) -> list[Path]:
    text = json.dumps(payload, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
        return []
    out.write_text(text)
    return [out]


def _emit_rows(rows: list[dict], out: Path | None, config: dict) -> list[Path]:
    if out is not None and out.suffix == ".csv":
        with out.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        sidecar = out.with_suffix(".json")
        sidecar.write_text(json.dumps({"config": config}, indent=2) + "\n")
        return [out, sidecar]
    return _emit({"config": config, "rows": rows}, out)


def cmd_sample(args) -> int:
    if args.seed is None:
        raise UsageError("sample: --seed is required for every stochastic command")
    out = Path(args.out) if args.out else None
    start = time.perf_counter()
    kind = args.kind
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out", "threads")}
    params["p"] = str(args.p)
    if kind == "density-sweep":
        n_values = [int(v) for v in args.n_values.split(",")]
        rows = mc.density_sweep(n_values, _fraction(args.alpha), args.trials, args.seed,
                                literal=args.literal_p, threads=args.threads)
        outputs = _emit_rows(rows, out, params)
    else:
        cfg = mc.SampleConfig(args.n, args.trials, args.seed, args.p, args.condition_zero)
        if kind == "classes":
            est = mc.sample_classes(cfg, threads=args.threads)
            outputs = _emit({"config": cfg.to_json(), **est.to_json()}, out)
        elif kind == "missing-sums":
            hist = mc.sample_missing_sums(cfg, threads=args.threads)
            outputs = hist.write(out) if out else _emit(_hist_payload(hist), None)
        elif kind == "one-sided":
            hist = mc.sample_one_sided(cfg, args.m, threads=args.threads)
            outputs = hist.write(out) if out else _emit(_hist_payload(hist), None)
        elif kind == "two-set":
            mean_sum, mean_diff = mc.sample_two_set_average(cfg, same_set=args.same_set,
                                                            threads=args.threads)
            outputs = _emit({"config": cfg.to_json(), "same_set": args.same_set,
                             "mean_sum_size": mean_sum, "mean_diff_size": mean_diff}, out)
        else:
            raise UsageError(f"unknown sample kind {kind!r}")
    if out is not None:
        _write_manifest(out, f"sample {kind}", params, outputs, time.perf_counter() - start,
                        seed=args.seed)
    return EXIT_OK


def _hist_payload(hist: mc.Histogram) -> dict:
    return {"config": hist.config, "total": hist.total,
            "bins": {str(b): c for b, c in sorted(hist.bins.items())}}


def cmd_construct(args) -> int:
    if args.catalog:
        print(cons.catalog_json())
        return EXIT_OK
    if args.verify_range:
        lo, hi = args.verify_range
        results = cons.verify_prescribed(lo, hi)
        print("x\timbalance\tmax\tok")
        for r in results:
            print(f"{r.x}\t{r.imbalance}\t{r.max_element}\t{'pass' if r.ok else 'FAIL ' + r.detail}")
        failed = [r for r in results if not r.ok]
        nonzero = [r for r in results if r.x != 0]
        passed_nonzero = sum(r.ok for r in nonzero)
        zero_note = " + x=0" if any(r.x == 0 for r in results) else ""
        verdict = "all pass" if not failed else f"{len(failed)} failing"
        print(f"{passed_nonzero}/{len(nonzero)} nonzero cases{zero_note} {verdict}")
        return EXIT_OK if not failed else EXIT_FAILED
    if args.x is None:
        raise UsageError("construct: give an integer x, --verify-range A B, or --catalog")
    s = cons.build_prescribed(args.x, nonempty_zero=args.nonempty_zero)
    plus, minus = sizes(s)
    print(render(s))
    print(f"|S+S|={plus} |S-S|={minus} imbalance={plus - minus}")
    return EXIT_OK


def _table(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write("\t".join(header) + "\n")
    for row in rows:
        buf.write("\t".join(str(c) for c in row) + "\n")
    return buf.getvalue()


def _verify_sum_formula(args):
    rows = []
    for n in range(1, args.n_max + 1):
        r = en.verify_sum_total(n, threads=args.threads)
        rows.append([n, r.enumerated, r.formula, r.ok])
    return ["n", "enumerated", "formula", "ok"], rows


def _verify_lemmas(args):
    n = args.n
    census = en.position_census(n, threads=args.threads)
    total = 1 << n
    rows = []
    for k in range(2 * n - 1):
        expected = pm.p_sum_missing_uniform(n, k) * total
        got = int(census.sum_missing[k])
        rows.append([f"sum k={k}", got, expected, got == expected])
    for k in range((n + 1) // 2, n):
        bound = pm.p_diff_missing_uniform(n, k)
        expected = bound.rational * total
        got = int(census.diff_missing[k])
        rows.append([f"diff k={k}", got, expected, got == expected])
    for k in range(1, (n + 1) // 2):
        bound = pm.p_diff_missing_uniform(n, k)
        got = int(census.diff_missing[k])
        rows.append([f"diff k={k} (bound)", got, f"<= {bound.value * total:.3f}",
                     got <= bound.value * total])
    return ["case", "count", "formula", "ok"], rows


COUNTING_THRESHOLDS = {"SD": (Fraction(2, 10**7), 15), "DD": (Fraction(15, 10**4), 4),
                       "BAL": (Fraction(2, 10**5), 1)}


def _verify_counting_bounds(args):
    rows = []
    for n in range(1, args.n_max + 1):
        counts = en.enumerate_joint(n, threads=args.threads).class_counts()
        for cls, (c, n0) in COUNTING_THRESHOLDS.items():
            if n >= n0:
                need = c * 2**n
                rows.append([n, cls, counts[cls], float(need), counts[cls] >= need])
    return ["n", "class", "count", "threshold", "ok"], rows


def _verify_fibonacci(args):
    rows = []
    for m in range(0, args.m_max + 1):
        got = en.count_missing_difference(m, 1)
        want = pm.fib_missing_one_count(m)
        rows.append([m, got, want, got == want])
    return ["m", "enumerated", "F(m+2)", "ok"], rows


def _verify_catalog(args):
    rows = []
    for e in cons.named_examples():
        plus, minus = sizes(e.set)
        rows.append([e.name, render(e.set), plus, minus, e.check()])
    return ["name", "set", "|S+S|", "|S-S|", "ok"], rows


def _known_minimal(x: int, d_max: int):
    """Expected diameter-minimal sets for the tabulated imbalances, with reflections."""
    table = {1: [cons.S1, cons.S1_PRIME], 2: [cons.S2], 4: [cons.S4]}
    if x not in table:
        return None
    d = max(table[x][0])
    if d_max < d:
        return None
    want = set()
    for members in table[x]:
        want.add(tuple(sorted(members)))
        want.add(tuple(sorted(d - m for m in members)))
    return want


def _verify_minimal_diameter(args):
    found = en.minimal_diameter_search(args.d_max, args.x)
    rows = [[render(s), s.max(), imbalance(s), imbalance(s) == args.x] for s in found]
    want = _known_minimal(args.x, args.d_max)
    if want is not None:
        got = {tuple(s) for s in found}
        rows.append(["matches known minimal sets", "", "", got == want])
    if not found:
        rows.append(["no set found", "", "", False])
    return ["set", "diameter", "imbalance", "ok"], rows


def _verify_fringe_forcing(args):
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        survey = en.fringe_survey(en.sum_dominant_fringe(n), threads=args.threads)
        all_sd = survey.class_counts["SD"] == survey.completions
        sums_ok = survey.sum_sizes == {2 * n - 2: survey.completions} and survey.all_missing_sum(1)
        rows.append([n, survey.completions, survey.class_counts["SD"], max(survey.diff_sizes),
                     all_sd and sums_ok and bool(survey.diff_bound_ok)])
    return ["n", "completions", "sum_dominant", "max|A-A|", "ok"], rows


VERIFY_TARGETS = {
    "sum-formula": _verify_sum_formula,
    "lemmas": _verify_lemmas,
    "counting-bounds": _verify_counting_bounds,
    "fibonacci": _verify_fibonacci,
    "catalog": _verify_catalog,
    "minimal-diameter": _verify_minimal_diameter,
    "fringe-forcing": _verify_fringe_forcing,
}


def cmd_verify(args) -> int:
    header, rows = VERIFY_TARGETS[args.target](args)
    sys.stdout.write(_table(header, rows))
    failed = [r for r in rows if not r[-1]]
    if failed:
        print(f"{len(failed)} failing case(s):", file=sys.stderr)
        sys.stderr.write(_table(header, failed))
        return EXIT_FAILED
    print(f"all {len(rows)} cases pass")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mstdlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", help="exhaustive census of (|S+S|, |S-S|)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--filter", default="all", help="all | endpoints | fringe:<spec.json>")
    p.add_argument("--out", help="census CSV path; a JSON sidecar and manifest are written beside it")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sample", help="seeded Monte Carlo experiments")
    p.add_argument("kind", choices=["classes", "missing-sums", "one-sided", "two-set", "density-sweep"])
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--m", type=int, default=mc.DEFAULT_TRUNCATION, help="one-sided truncation")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--p", type=_fraction, default=Fraction(1, 2), help="inclusion probability")
    p.add_argument("--condition-zero", action="store_true")
    p.add_argument("--same-set", action="store_true", help="two-set diagnostic with T = S")
    p.add_argument("--n-values", default="1000,10000", help="density-sweep sizes, comma separated")
    p.add_argument("--alpha", default="2/3", help="density-sweep exponent, p = n^-alpha")
    p.add_argument("--literal-p", action="store_true", help="density-sweep: alpha=0 means p=1")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("construct", help="set with prescribed |S+S| - |S-S|")
    p.add_argument("x", type=int, nargs="?")
    p.add_argument("--verify-range", type=int, nargs=2, metavar=("A", "B"))
    p.add_argument("--nonempty-zero", action="store_true")
    p.add_argument("--catalog", action="store_true", help="print the named examples as JSON")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="exact checks of the counting and probability formulas")
    p.add_argument("target", choices=sorted(VERIFY_TARGETS))
    p.add_argument("--n-max", type=int, default=22)
    p.add_argument("--n-min", type=int, default=23)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--m-max", type=int, default=24)
    p.add_argument("--x", type=int, default=4)
    p.add_argument("--d-max", type=int, default=25)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
