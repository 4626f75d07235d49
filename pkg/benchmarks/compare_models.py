#!/usr/bin/env python3
"""
Benchmark the four models on a NARMA-10 series on the current machine.

The reservoirs run with the published setup. The recurrent networks train for fewer epochs
and the QLSTM on a truncated train window so that the benchmark finishes in minutes.
"""

import os
import sys
from typing import List  # pylint: disable=unused-import

import narmabench
from narmabench._bench import format_table, median_records


def writeln_utf8(text: str) -> None:
    """
    Write the text to STDOUT using UTF-8 encoding followed by a new-line character.

    We can not use ``print()`` as we can not rely on the correct encoding in Windows.
    """
    sys.stdout.buffer.write(text.encode("utf-8"))
    sys.stdout.buffer.write(os.linesep.encode("utf-8"))


def desk_config() -> narmabench.BenchConfig:
    """Shorten the training of the recurrent networks; the rest follows the published setup."""
    return narmabench.BenchConfig(
        seed=0,
        repeats={"esn": 3, "qrc": 3, "lstm": 1, "qlstm": 1},
        lstm=narmabench.LstmConfig(train=narmabench.TrainSpec(epochs=5)),
        qlstm=narmabench.QlstmConfig(
            max_steps=200, train=narmabench.TrainSpec(epochs=2, learning_rate=0.01)
        ),
    )


def measure_models() -> None:
    config = desk_config()
    series = narmabench.generate_narma10(config.series.total, config.seed)

    records = []  # type: List[narmabench.BenchRecord]
    for model in config.models:
        for repeat in range(config.repeats[model]):
            records.append(narmabench.run_model(config, model, series, repeat=repeat).record)

    medians = list(median_records(records).values())
    report = narmabench.sustainability_index(medians, config.sustainability_weights)

    writeln_utf8(format_table(medians, report, tablefmt="rst"))
    writeln_utf8("")
    writeln_utf8(
        "Ranking by the sustainability index: {}".format(
            " > ".join(model.upper() for model in report.ranking())
        )
    )


if __name__ == "__main__":
    writeln_utf8("Benchmarking the models on NARMA-10:")
    writeln_utf8("")
    measure_models()
