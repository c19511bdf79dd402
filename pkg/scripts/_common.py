"""Shared plumbing for the sweep scripts."""
import argparse

from speedmeter.scenario import parse_config, run_scenario


def run(doc, description, suffix=""):
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--out", default=doc["output_prefix"], help="output path prefix")
    ap.add_argument("--zeta-opt", action="store_true", help="optimise the readout angle")
    args = ap.parse_args()
    doc = dict(doc, output_prefix=args.out + suffix, zeta_opt=args.zeta_opt)
    result = run_scenario(parse_config(doc))
    for r in result.runs:
        print(f"{r.label:<28} low-band ASD slope {r.slope:+.3f}  {r.path}")
    print(f"summary: {result.summary_path}")
    return result
