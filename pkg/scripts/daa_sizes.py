"""Minimized cost-DAA sizes over all DNA patterns of each length.

    python3 scripts/daa_sizes.py --max-m 5 [--threads 4]
"""

import time

import click

from patdist.daa import full_state_space_size
from patdist.matchers import Alphabet
from patdist.sweep import sweep


@click.command()
@click.option("--max-m", default=5, show_default=True)
@click.option("--threads", default=1, show_default=True)
def run(max_m, threads):
    dna = Alphabet("ACGT")
    print(f"{'m':>2} {'unminimized':>11}  {'Horspool':>16} {'BOM':>16} {'B(N)DM':>16}")
    for m in range(2, max_m + 1):
        t0 = time.perf_counter()
        stats = {s.algorithm: s for s in sweep(dna, m, ("horspool", "bom", "bdm"), threads=threads)}
        cells = [f"{s.min} / {s.avg:.1f} / {s.max}" for s in (stats["horspool"], stats["bom"], stats["bdm"])]
        print(f"{m:>2} {full_state_space_size(4, m):>11}  " + " ".join(f"{c:>16}" for c in cells)
              + f"   ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    run()
