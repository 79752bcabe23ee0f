#!/usr/bin/env python3
"""Run the precision-vs-quality PSNR study on a test image.

Usage:
    python scripts/psnr_sweep.py [image.pgm] [--out report.csv]

Without an image argument the bundled 512x512 synthetic photo stand-in
is used.  The sweep covers quality factors 95..75 at tolerances 1e-3,
1e-4 and 1e-6, which is enough to see both the quality trend and the
flat precision plateau past 1e-3.
"""

import argparse
import sys
import time

from cordic_dct.codec import sweep
from cordic_dct.images import photo_proxy
from cordic_dct.pgm import read_pgm


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("image", nargs="?", default=None, help="PGM input (default: synthetic)")
    ap.add_argument("--out", default=None, help="write the CSV report here")
    ap.add_argument("--qualities", default="95,90,85,80,75")
    ap.add_argument("--epsilons", default="1e-3,1e-4,1e-6")
    args = ap.parse_args(argv)

    img = read_pgm(args.image) if args.image else photo_proxy(512)
    qualities = [int(q) for q in args.qualities.split(",")]
    epsilons = [float(e) for e in args.epsilons.split(",")]

    t0 = time.time()
    report = sweep(img, epsilons, qualities)
    csv = report.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
    print(csv)
    print(f"# {len(report.rows)} cells on {img.width}x{img.height} image "
          f"in {time.time() - t0:.1f} s", file=sys.stderr)


if __name__ == "__main__":
    main()
