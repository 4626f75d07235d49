# pylint: disable=missing-docstring

import pathlib
import unittest

import benchmark


class TestMarkers(unittest.TestCase):
    def test_docs_contain_the_markers_in_order(self) -> None:
        repo_root = pathlib.Path(__file__).parent.parent
        lines = (
            (repo_root / "docs" / "source" / "benchmarks.rst")
            .read_text(encoding="utf-8")
            .splitlines()
        )

        self.assertEqual(1, lines.count(benchmark.MARKER_START))
        self.assertEqual(1, lines.count(benchmark.MARKER_END))
        self.assertLess(lines.index(benchmark.MARKER_START), lines.index(benchmark.MARKER_END))

    def test_markers_are_spelled_out(self) -> None:
        self.assertEqual(".. Benchmark report from benchmark.py starts.", benchmark.MARKER_START)
        self.assertEqual(".. Benchmark report from benchmark.py ends.", benchmark.MARKER_END)


if __name__ == "__main__":
    unittest.main()
