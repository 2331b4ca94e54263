"""Tabulate the Weierstrass semigroups <3, 2r+s, 2s+r> over a range of (r, s).

For every pair with 3 not dividing s + 2r the script prints the genus, the
gap sequence, the alpha vector, the partition attached to the gap profile,
and whether the semigroup is symmetric.  Useful as a quick sanity atlas:
non-symmetric entries are exactly those with r, s >= 1 and r != s mod 3.

Run:  python scripts/semigroup_atlas.py --max-weight 8
"""

from __future__ import annotations

import argparse

from trigjac import Semigroup, family_semigroup, gap_profile


def atlas_row(r: int, s: int) -> dict:
    sg: Semigroup = family_semigroup(r, s)
    prof = gap_profile(sg)
    return {
        "r": r,
        "s": s,
        "generators": sg.generators,
        "genus": sg.genus,
        "conductor": sg.conductor,
        "gaps": sg.gaps,
        "alphas": prof.alphas,
        "partition": prof.lambdas,
        "symmetric": sg.is_symmetric(),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-weight", type=int, default=8,
                    help="largest r + s to include")
    ap.add_argument("--only-nonsymmetric", action="store_true")
    args = ap.parse_args()

    rows = []
    for total in range(1, args.max_weight + 1):
        for r in range(total + 1):
            s = total - r
            if (s + 2 * r) % 3 == 0:
                continue
            row = atlas_row(r, s)
            if args.only_nonsymmetric and row["symmetric"]:
                continue
            rows.append(row)

    hdr = f"{'(r,s)':>8} {'gens':>14} {'g':>3} {'cond':>5} {'sym':>4}   gaps / partition"
    print(hdr)
    print("-" * len(hdr))
    for row in rows:
        tag = "yes" if row["symmetric"] else "no"
        gen = ",".join(str(m) for m in row["generators"])
        gaps = ",".join(str(x) for x in row["gaps"])
        lam = ",".join(str(x) for x in row["partition"])
        print(f"({row['r']},{row['s']})".rjust(8)
              + f" {gen:>14} {row['genus']:>3} {row['conductor']:>5} {tag:>4}"
              + f"   [{gaps}] / ({lam})")

    n_nonsym = sum(1 for row in rows if not row["symmetric"])
    print(f"\n{len(rows)} valid pairs, {n_nonsym} non-symmetric")


if __name__ == "__main__":
    main()
