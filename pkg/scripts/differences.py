"""Cost-difference probabilities between algorithm pairs on uniform random DNA.

    python3 scripts/differences.py [--n 100]
"""

import click

from patdist.diffdaa import difference_distribution
from patdist.matchers import Pattern, analysis_for
from patdist.textmodel import iid_model

PAIRS = [
    ("CGAAAA", "horspool", "bdm"),
    ("ACGTAC", "horspool", "bdm"),
    ("CAAAAA", "bom", "bdm"),
    ("ACGTAC", "bom", "bdm"),
]


@click.command()
@click.option("--n", default=100, show_default=True)
def run(n):
    model = iid_model("ACGT")
    print(f"{'pattern':8} {'pair':15} {'P(<)':>8} {'P(=)':>8} {'P(>)':>8} {'P(<=)':>8} {'E[diff]':>9}  states")
    for p, x, y in PAIRS:
        pattern = Pattern.from_string(p, "ACGT")
        r = difference_distribution(analysis_for(x, pattern), analysis_for(y, pattern), model, n)
        print(f"{p:8} {x + '-' + y:15} {r.less:8.4f} {r.equal:8.4f} {r.greater:8.4f} "
              f"{r.less + r.equal:8.4f} {r.distribution.mean:9.4f}  {r.sizes['difference_minimized']}")


if __name__ == "__main__":
    run()
