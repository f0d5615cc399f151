"""Command-line front end: ``patdist dist|compare|sweep|verify|simulate|stats``.

Data goes to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click

from patdist.daa import StateCapExceeded, build_cost_daa, default_state_cap, minimize_daa
from patdist.diffdaa import difference_distribution
from patdist.distribution import Distribution, InvalidDistribution, distribution_stats, load
from patdist.matchers import Alphabet, Pattern, analysis_for
from patdist.paa import analysis_distribution, kmp_distribution, monte_carlo_distribution
from patdist.sweep import sweep
from patdist.textmodel import ModelError, TextModel, iid_model, load_model, markov_model
from patdist.verify import verify_all

log = logging.getLogger("patdist")

ALGORITHMS = ["horspool", "bdm", "bndm", "bom", "kmp"]


@dataclass
class JobSpec:
    command: str
    algorithms: list[str]
    pattern: str | None
    alphabet: str
    iid: str | None = None
    markov: str | None = None
    model_file: str | None = None
    n: int = 0
    fmt: str = "csv"
    out: str | None = None
    seed: int = 0
    samples: int = 0
    state_cap: int | None = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.n < 0:
            raise click.BadParameter("text length must be >= 0", param_hint="--n")
        sources = [s for s in (self.iid, self.markov, self.model_file) if s is not None]
        if len(sources) > 1:
            raise click.UsageError("give at most one of --iid, --markov, --model")
        if self.pattern is not None:
            bad = set(self.pattern) - set(self.alphabet)
            if bad:
                raise click.BadParameter(
                    f"symbols {''.join(sorted(bad))!r} not in alphabet {self.alphabet!r}",
                    param_hint="--pattern",
                )

    def model(self) -> TextModel:
        """Text model from the one declared source; uniform i.i.d. if none."""
        if self.model_file is not None:
            model = load_model(self.model_file)
        elif self.markov is not None:
            data = json.loads(Path(self.markov).read_text())
            model = markov_model(data.get("alphabet", self.alphabet), int(data["order"]), data["probs"])
        else:
            model = iid_model(self.alphabet, parse_iid(self.iid or "uniform", self.alphabet))
        if model.alphabet.symbols != self.alphabet:
            raise click.UsageError(
                f"model alphabet {model.alphabet.symbols!r} differs from --alphabet {self.alphabet!r}"
            )
        return model

    def pattern_obj(self) -> Pattern:
        if not self.pattern:
            raise click.UsageError("--pattern is required")
        return Pattern.from_string(self.pattern, Alphabet(self.alphabet))


def parse_iid(spec: str, alphabet: str) -> dict[str, float] | None:
    """``uniform`` or ``A=0.3,C=0.2,...``."""
    if spec.strip().lower() == "uniform":
        return None
    probs = {}
    for part in spec.split(","):
        sym, _, val = part.partition("=")
        sym = sym.strip()
        if len(sym) != 1 or not val:
            raise click.BadParameter(f"cannot parse {part!r}; expected SYMBOL=PROB", param_hint="--iid")
        probs[sym] = float(val)
    return probs


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def write_distribution(d: Distribution, spec: JobSpec) -> None:
    d.check()
    emit(d.dumps(spec.fmt), spec.out)


def info(msg: str) -> None:
    click.echo(msg, err=True)


def common_options(f):
    f = click.option("--alphabet", default="ACGT", show_default=True, help="Ordered string of symbols.")(f)
    f = click.option("--pattern", default=None, help="Pattern over the alphabet.")(f)
    f = click.option("--n", "n", type=int, default=100, show_default=True, help="Text length.")(f)
    f = click.option("--iid", default=None, help="'uniform' or 'A=0.3,C=0.2,...'.")(f)
    f = click.option("--markov", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="JSON {order, probs:{context:{symbol:p}}}.")(f)
    f = click.option("--model", "model_file", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="General text-model JSON file.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)(f)
    f = click.option("--out", default=None, type=click.Path(dir_okay=False), help="Output file (default stdout).")(f)
    f = click.option("--state-cap", type=int, default=None, help="Abort if a DAA would exceed this many states.")(f)
    return f


def run_guarded(fn):
    """Turn library errors into a clean nonzero exit."""
    try:
        return fn()
    except (StateCapExceeded, ModelError, InvalidDistribution, ValueError) as exc:
        info(f"error: {exc}")
        sys.exit(2)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """Exact distributions of text-character accesses of window-based matchers."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s")


@main.command()
@click.option("--algo", type=click.Choice(ALGORITHMS, case_sensitive=False), required=True)
@common_options
def dist(algo, alphabet, pattern, n, iid, markov, model_file, fmt, out, state_cap):
    """Exact cost distribution of one algorithm on random texts of length N."""
    spec = JobSpec("dist", [algo], pattern, alphabet, iid, markov, model_file, n, fmt, out,
                   state_cap=state_cap)
    spec.validate()

    def go():
        if algo.lower() == "kmp":
            d = kmp_distribution(n)
        else:
            d, sizes = analysis_distribution(
                analysis_for(algo, spec.pattern_obj()), spec.model(), n, state_cap=state_cap
            )
            info(f"states: reachable={sizes['daa_reachable']} minimized={sizes['daa_minimized']} "
                 f"paa={sizes['paa']}")
        info(f"mean={d.mean:.6f} variance={d.variance:.6f}")
        write_distribution(d, spec)

    run_guarded(go)


@main.command()
@click.option("--algo", "algos", type=click.Choice(ALGORITHMS[:-1], case_sensitive=False), multiple=True,
              required=True, help="Give exactly twice: first minus second.")
@common_options
def compare(algos, alphabet, pattern, n, iid, markov, model_file, fmt, out, state_cap):
    """Exact distribution of cost(first) - cost(second) on the same random text."""
    if len(algos) != 2:
        raise click.UsageError("compare needs --algo exactly twice")
    spec = JobSpec("compare", list(algos), pattern, alphabet, iid, markov, model_file, n, fmt, out,
                   state_cap=state_cap)
    spec.validate()

    def go():
        p = spec.pattern_obj()
        first, second = (analysis_for(a, p) for a in algos)
        res = difference_distribution(first, second, spec.model(), n, state_cap=state_cap)
        info(f"states: {res.sizes}")
        info(f"P({algos[0]} < {algos[1]}) = {res.less:.4f}   P(=) = {res.equal:.4f}   "
             f"P(>) = {res.greater:.4f}   mean difference = {res.distribution.mean:.4f}")
        write_distribution(res.distribution, spec)

    run_guarded(go)


@main.command("sweep")
@click.option("--alphabet", default="ACGT", show_default=True)
@click.option("--m", "ms", type=int, multiple=True, help="Pattern length(s); default 2..5.")
@click.option("--algo", "algos", type=click.Choice(ALGORITHMS[:-1], case_sensitive=False), multiple=True,
              help="Default: horspool, bom, bdm.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--allow-large", is_flag=True, help="Permit m > 5.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--state-cap", type=int, default=None)
def sweep_cmd(alphabet, ms, algos, threads, allow_large, fmt, out, state_cap):
    """Minimized DAA sizes over all patterns of each length (min/avg/max)."""
    ms = ms or (2, 3, 4, 5)
    if max(ms) > 5 and not allow_large:
        raise click.UsageError("m > 5 takes minutes to hours; pass --allow-large")
    algos = algos or ("horspool", "bom", "bdm")
    alpha = Alphabet(alphabet)
    rows = []
    incomplete = False
    for m in ms:
        for stats in sweep(alpha, m, algos, threads=threads, state_cap=state_cap):
            rows.append(stats.row())
            incomplete |= stats.incomplete
            info(f"m={m} {stats.algorithm:8s} unminimized={stats.unminimized} "
                 f"{stats.min} / {stats.avg:.1f} / {stats.max}"
                 + ("  [INCOMPLETE: state cap hit]" if stats.incomplete else ""))
    if fmt == "json":
        emit(json.dumps(rows, indent=2) + "\n", out)
    else:
        header = list(rows[0])
        lines = [",".join(header)] + [",".join(str(r[h]) for h in header) for r in rows]
        emit("\n".join(lines) + "\n", out)
    if incomplete:
        sys.exit(1)


@main.command()
@click.option("--alphabet", default="AC", show_default=True)
@click.option("--max-m", type=int, default=3, show_default=True)
@click.option("--max-n", type=int, default=10, show_default=True)
@click.option("--diff", "difference", is_flag=True, help="Check difference DAAs for every algorithm pair.")
def verify(alphabet, max_m, max_n, difference):
    """Compare PAA distributions with exhaustive enumeration of all texts."""
    alpha = Alphabet(alphabet)
    if len(alpha) ** max_n > 10**7:
        raise click.UsageError("|alphabet|^max_n exceeds 10^7 texts")
    report = verify_all(alpha, max_m, max_n, difference=difference)
    mode = "difference" if difference else "cost"
    if report.passed:
        click.echo(f"PASS {mode}: {report.checks} checks, max deviation {report.max_deviation:.3g}")
        return
    click.echo(f"FAIL {mode}: {len(report.failures)} failing checks; first: {report.failures[0]}")
    sys.exit(1)


@main.command()
@click.option("--algo", type=click.Choice(ALGORITHMS[:-1], case_sensitive=False), required=True)
@click.option("--samples", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--check", is_flag=True, help="Also compute the exact mean and report a z-score.")
@common_options
def simulate(algo, samples, seed, check, alphabet, pattern, n, iid, markov, model_file, fmt, out, state_cap):
    """Monte-Carlo cost distribution from sampled texts."""
    if samples < 1:
        raise click.BadParameter("samples must be >= 1", param_hint="--samples")
    spec = JobSpec("simulate", [algo], pattern, alphabet, iid, markov, model_file, n, fmt, out,
                   seed=seed, samples=samples, state_cap=state_cap)
    spec.validate()
    failed = False

    def go():
        nonlocal failed
        analysis = analysis_for(algo, spec.pattern_obj())
        model = spec.model()
        res = monte_carlo_distribution(analysis, model, n, samples, seed)
        info(f"empirical mean={res.mean:.6f} stderr={res.stderr:.6f} samples={samples}")
        if check:
            exact, _ = analysis_distribution(analysis, model, n, state_cap=state_cap)
            z = (res.mean - exact.mean) / res.stderr if res.stderr > 0 else (
                0.0 if res.mean == exact.mean else math.inf)
            info(f"exact mean={exact.mean:.6f} z={z:.3f}")
            failed = abs(z) > 4
        write_distribution(res.distribution, spec)

    run_guarded(go)
    if failed:
        info("check failed: |z| > 4")
        sys.exit(1)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def stats(path):
    """Summary statistics of a distribution file (CSV or JSON)."""

    def go():
        d = load(path)
        d.check()
        s = distribution_stats(d)
        click.echo(f"mean      {s['mean']:.6f}")
        click.echo(f"variance  {s['variance']:.6f}")
        click.echo(f"min       {s['min']}")
        click.echo(f"max       {s['max']}")
        for q, v in s["quantiles"].items():
            click.echo(f"q{q:<8} {v}")
        if d.values[0] < 0:
            less, equal, greater = d.sign_probabilities()
            click.echo(f"P(<0)     {less:.6f}")
            click.echo(f"P(=0)     {equal:.6f}")
            click.echo(f"P(>0)     {greater:.6f}")

    run_guarded(go)


@main.command("dump-daa", hidden=True)
@click.option("--algo", type=click.Choice(ALGORITHMS[:-1], case_sensitive=False), required=True)
@click.option("--pattern", required=True)
@click.option("--alphabet", default="ACGT")
@click.option("--minimize/--no-minimize", default=True)
def dump_daa(algo, pattern, alphabet, minimize):
    """Plain-text listing of a cost DAA, for debugging."""
    daa = build_cost_daa(analysis_for(algo, Pattern.from_string(pattern, alphabet)),
                         state_cap=default_state_cap())
    if minimize:
        daa = minimize_daa(daa)
    daa.dump(sys.stdout)


if __name__ == "__main__":
    main()
