"""
The whole pipeline as eight shell commands
==========================================

Everything the library does is also reachable from the `homedest` command.
This script drives the full chain in-process into ./demo_workspace; run it
twice and every artifact comes back byte-identical.
"""

import pathlib

from homedest.cli import main

out = pathlib.Path("demo_workspace")
steps = [
    ["synth", "--users", "1200", "--seed", "7"],   # posts, friends, ground truth
    ["label"],                                     # residence + nationality
    ["atlas"],                                     # hashtag -> country table
    ["score"],                                     # HA/DA per migrant
    ["null", "--replicates", "3"],                 # shuffled baseline
    ["stats"],                                     # observed-vs-null battery
    ["correlate", "--min-group-size", "5"],        # covariate correlations
    ["report"],                                    # figure-ready tables
]

for step in steps:
    print(f"$ homedest {' '.join(step)}")
    main(step + ["--out", str(out)])
    print()

print("workspace contents:")
for path in sorted(out.rglob("*")):
    if path.is_file():
        size = path.stat().st_size
        print(f"  {path.relative_to(out)!s:<40s} {size:>9,d} bytes")

print("\nfirst lines of the test battery:")
for line in (out / "test_results.csv").read_text().splitlines()[:5]:
    print(f"  {line}")
