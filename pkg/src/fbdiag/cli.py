"""Command-line entry point: validate descriptors, run and diagnose scenarios."""

import argparse
import json
import logging
import sys

from .errors import DescriptorError, FbDiagError
from .model import parse_system
from .runner import run_scenario
from .scenario import load_scenario

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


def cmd_validate(args):
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        parse_system(text)
    except DescriptorError as e:
        for d in e.diagnostics:
            print(f"{args.file}:{d}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def _load(path):
    try:
        return load_scenario(path)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return None
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"error: invalid scenario {path}: {e}", file=sys.stderr)
        return None


def cmd_run(args):
    scenario = _load(args.scenario)
    if scenario is None:
        return EXIT_IO
    try:
        result = run_scenario(scenario, args.output, fde_mode=args.fde, seed=args.seed)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except FbDiagError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    r = result.report
    met = " ".join(f"{t['requirement']}={t['met']}/{t['total']}" for t in r["timing"])
    print(f"{scenario.name}: {r['duration_ms']} ms, {r['events_processed']} events, {met}")
    for d in r.get("diagnoses", []):
        print(f"diagnosis {d['pathway']}: {d['hypothesis']} "
              f"(p={d['posterior'][d['hypothesis']]:.3f})")
    return EXIT_OK


def cmd_diagnose(args):
    scenario = _load(args.scenario)
    if scenario is None:
        return EXIT_IO
    try:
        result = run_scenario(scenario, args.output, seed=args.seed,
                              force_pathway=args.pathway, stop_after_report=True)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except FbDiagError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    reports = [r for r in result.fde.reports if r.pathway == args.pathway]
    if not reports:
        print(f"error: diagnosis of {args.pathway} did not finish within the scenario",
              file=sys.stderr)
        return EXIT_DOMAIN
    json.dump(reports[0].to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="fbdiag", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a .fbsys descriptor")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("run", help="simulate a scenario and write its artifacts")
    r.add_argument("scenario")
    r.add_argument("-o", "--output", required=True, help="output directory")
    r.add_argument("--seed", type=int)
    r.add_argument("--fde", choices=("off", "monitor", "auto"))
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("diagnose", help="force a diagnosis of one pathway at t=0")
    d.add_argument("scenario")
    d.add_argument("--pathway", required=True)
    d.add_argument("--seed", type=int)
    d.add_argument("-o", "--output", help="also write run artifacts here")
    d.set_defaults(func=cmd_diagnose)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_IO if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
