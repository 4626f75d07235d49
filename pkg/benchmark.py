#!/usr/bin/env python3
"""Run benchmarks and, if specified, overwrite the benchmark section of the docs."""
import argparse
import pathlib
import platform
import subprocess
import sys
from typing import List

import cpuinfo
import numpy as np

import narmabench
from narmabench._bench import format_table

#: Line which opens the generated section of the benchmarks page
MARKER_START = ".. Benchmark report from benchmark.py starts."

#: Line which closes the generated section of the benchmarks page
MARKER_END = ".. Benchmark report from benchmark.py ends."


def benchmark_models(repo_root: pathlib.Path, overwrite: bool) -> None:
    """Run the model benchmarks and include them in the docs."""
    script_rel_paths = ["benchmarks/compare_models.py"]

    if not overwrite:
        for i, script_rel_path in enumerate(script_rel_paths):
            if i > 0:
                print()
            subprocess.check_call([sys.executable, str(repo_root / script_rel_path)])
        return

    out = ["The following scripts were run:\n\n"]
    for script_rel_path in script_rel_paths:
        out.append("* ``{}``\n".format(script_rel_path))
    out.append("\n")

    info = cpuinfo.get_cpu_info()
    out.append(
        ("The benchmarks were executed on {}.\nWe used Python {}, narmabench {} and numpy {}.\n\n").format(
            info.get("brand_raw", info.get("brand", "an unknown CPU")),
            platform.python_version(),
            narmabench.__version__,
            np.__version__,
        )
    )

    out.append("The following tables summarize the results.\n\n")
    stdouts = []  # type: List[str]

    for script_rel_path in script_rel_paths:
        stdout = subprocess.check_output(
            [sys.executable, str(repo_root / script_rel_path)]
        ).decode("utf-8")
        stdouts.append(stdout)

        out.append(stdout)
        out.append("\n")

    report = narmabench.sustainability_index(narmabench.PUBLISHED_RECORDS)
    table = format_table(
        narmabench.PUBLISHED_RECORDS, report, show_published=False, tablefmt="rst"
    )
    out.append("For comparison, the published values:\n\n")
    out.append(table)
    out.append("\n")

    docs_path = repo_root / "docs" / "source" / "benchmarks.rst"
    docs = docs_path.read_text(encoding="utf-8")
    marker_start = MARKER_START
    marker_end = MARKER_END
    lines = docs.splitlines()

    try:
        index_start = lines.index(marker_start)
    except ValueError as exc:
        raise ValueError(
            "Could not find the marker for the benchmarks in the {}: {}".format(
                docs_path, marker_start
            )
        ) from exc

    try:
        index_end = lines.index(marker_end)
    except ValueError as exc:
        raise ValueError(
            "Could not find the end marker for the benchmarks in the {}: {}".format(
                docs_path, marker_end
            )
        ) from exc

    assert (
        index_start < index_end
    ), "Unexpected end marker before start marker for the benchmarks."

    lines = (
        lines[: index_start + 1]
        + [""]
        + ("".join(out)).splitlines()
        + [""]
        + lines[index_end:]
    )
    docs_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    # This is necessary so that the benchmarks do not complain on a Windows machine if the console encoding has not
    # been properly set.
    sys.stdout.buffer.write(("\n\n".join(stdouts) + "\n").encode("utf-8"))


def main() -> int:
    """ "Execute main routine."""
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--overwrite",
        help="Overwrites the corresponding section in the docs.",
        action="store_true",
    )

    args = parser.parse_args()

    overwrite = bool(args.overwrite)

    print("Benchmarking the models...")
    repo_root = pathlib.Path(__file__).parent
    benchmark_models(repo_root=repo_root, overwrite=overwrite)

    return 0


if __name__ == "__main__":
    sys.exit(main())
