"""Standalone entry point: render every figure listed in a figures config."""

import sys

from .render import load_figure_specs, render


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if len(argv) != 1 or argv[0] in ("-h", "--help"):
        print("usage: render_figures <config.json>", file=sys.stderr)
        return 1
    try:
        specs = load_figure_specs(argv[0])
        for spec in specs:
            info = render(spec)
            print(f"wrote {info['output']}")
    except Exception as e:
        print(f"render_figures: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
