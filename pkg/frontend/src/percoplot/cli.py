"""percoplan-plot: render a campaign CSV into one figure."""

import argparse
import sys

from .render import KINDS, PlotSpec, SchemaError, EmptyGroupError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="percoplan-plot",
                                     description="Render campaign CSVs to figures")
    parser.add_argument("--records", required=True, help="input CSV path")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", required=True, help="output image path")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        path = render(PlotSpec(records=args.records, kind=args.kind, out=args.out))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (EmptyGroupError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
