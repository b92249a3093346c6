"""Regenerate corpus golden files: ``python -m ctxgram.corpus [--check] [ID ...]``."""

import argparse
import sys

from . import ids, regenerate


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m ctxgram.corpus")
    ap.add_argument("ids", nargs="*", help="entries to process (default: all)")
    ap.add_argument("--check", action="store_true", help="only report entries whose golden files are stale")
    args = ap.parse_args(argv)
    stale = 0
    for entry_id in args.ids or ids():
        same = regenerate(entry_id, write=not args.check)
        stale += not same
        status = "ok" if same else ("stale" if args.check else "rewritten")
        print(f"{entry_id}: {status}")
    return 1 if args.check and stale else 0


if __name__ == "__main__":
    sys.exit(main())
