"""Gaps in the cost distributions: BOM shows zero-probability values at a fixed period.

    python3 scripts/periodicity.py [--n 100] [--out-dir dists/]
"""

from pathlib import Path

import click

from patdist.distribution import interior_zero_period
from patdist.matchers import Pattern, analysis_for
from patdist.paa import analysis_distribution
from patdist.textmodel import iid_model


@click.command()
@click.option("--n", default=100, show_default=True)
@click.option("--pattern", "patterns", multiple=True, default=("ATATAT", "ACGTAC", "CAAAAA"))
@click.option("--out-dir", type=click.Path(file_okay=False), default=None, help="Also write each pmf as CSV.")
def run(n, patterns, out_dir):
    model = iid_model("ACGT")
    for p in patterns:
        for algo in ("horspool", "bom", "bdm"):
            d, sizes = analysis_distribution(analysis_for(algo, Pattern.from_string(p, "ACGT")), model, n)
            period, zeros = interior_zero_period(d)
            shown = ", ".join(map(str, zeros[:8])) + (" ..." if len(zeros) > 8 else "")
            print(f"{p} {algo:8s} mean={d.mean:7.3f} sd={d.variance ** 0.5:6.3f} "
                  f"support=[{d.support[0]},{d.support[-1]}] period={period} zeros: {shown}")
            if out_dir:
                Path(out_dir).mkdir(parents=True, exist_ok=True)
                (Path(out_dir) / f"{algo}_{p}_n{n}.csv").write_text(d.to_csv())


if __name__ == "__main__":
    run()
