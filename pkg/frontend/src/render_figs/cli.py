"""render_figs <figure_id>|all --in <csv dir> --out <image dir>."""

import argparse
import sys

import matplotlib.pyplot as plt

from .render import RenderError, render
from .specs import FIGURE_IDS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figs",
        description="Render gmmlab experiment CSVs into figure images.",
    )
    parser.add_argument("figure_id", choices=FIGURE_IDS + ("all",))
    parser.add_argument("--in", dest="in_dir", required=True, help="directory with the CSVs")
    parser.add_argument("--out", dest="out_dir", required=True, help="output image directory")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)

    ids = FIGURE_IDS if args.figure_id == "all" else (args.figure_id,)
    try:
        for figure_id in ids:
            fig, path = render(
                figure_id, args.in_dir, args.out_dir, fmt=args.format, dpi=args.dpi
            )
            plt.close(fig)
            print(path)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
