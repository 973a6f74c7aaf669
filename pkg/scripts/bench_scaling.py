#!/usr/bin/env python3
"""Benchmark warp wall time across resolutions and report the log-log
scaling slope as line-delimited JSON."""

import argparse

from noisewarp.bench import bench_report_ldjson, bench_warp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="256,512,1024,2048")
    ap.add_argument("--frames", type=int, default=16)
    ap.add_argument("--warmup", type=int, default=2)
    ap.add_argument("--flow-kind", choices=["pan", "zoom", "rotate"],
                    default="zoom")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s]
    report = bench_warp(sizes, frames=args.frames, warmup=args.warmup,
                        flow_kind=args.flow_kind)
    print(bench_report_ldjson(report))


if __name__ == "__main__":
    main()
