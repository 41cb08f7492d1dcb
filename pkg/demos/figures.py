"""Build both small obstructions, check A1-A7, and compare packing with cover as n grows.

    python3 demos/figures.py [outdir]

Writes one .lg and one .dot file per instance into outdir (default: cwd).
"""
import math
import sys
from pathlib import Path

from apathep import linkage
from apathep.epcond import LambdaSet
from apathep.group import GroupSpec
from apathep.obstruct import check_conditions, dump_ribboned, gen_fig1a, gen_fig1b
from apathep.lgraph import to_dot


def main(outdir="."):
    out = Path(outdir)
    z6, z15 = GroupSpec((6,)), GroupSpec((15,))
    cases = [
        ("fig1a", z6, LambdaSet.of(z6, [4]), lambda n: gen_fig1a(z6, 0, 1, 3, n)),
        ("fig1b", z15, LambdaSet.of(z15, [x for x in range(15) if math.gcd(x, 15) == 1]), lambda n: gen_fig1b(z15, 0, 3, 5, n)),
    ]
    print(f"{'instance':10} {'n':>2} {'|V|':>5} {'obstr':>6} {'nu':>3} {'tau':>4}")
    for name, spec, lam, build in cases:
        for n in (2, 3):
            r = build(n)
            flags = check_conditions(r, lam)
            dg = linkage.from_ribboned(r)
            nu = linkage.max_packing(dg, lam).size
            tau = linkage.min_cover(dg, lam).size
            print(f"{name:10} {n:>2} {r.graph.n:>5} {str(flags['obstruction']):>6} {nu:>3} {tau:>4}")
            (out / f"{name}_n{n}.lg").write_text(dump_ribboned(r, lam))
            (out / f"{name}_n{n}.dot").write_text(to_dot(r.graph))


if __name__ == "__main__":
    main(*sys.argv[1:])
