"""
CSV/JSON Loader 단위 테스트
"""
import json
import os
import tempfile
import unittest

import numpy as np
import pandas as pd

from svmc.loaders.base import IfExists
from svmc.loaders.csv import CSVLoader, read_csv
from svmc.loaders.json import JSONLoader, read_json, to_jsonable
from svmc.models.core import ModelKind


class TestCSVLoader(unittest.TestCase):
    """CSV Loader 테스트"""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.temp_dir.name, "nested", "chain.csv")

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_validate_config(self):
        with self.assertRaises(ValueError):
            CSVLoader({})
        with self.assertRaises(ValueError):
            CSVLoader({"file_path": self.path, "if_exists": "append"})

    def test_exact_round_trip(self):
        values = np.random.default_rng(0).standard_normal(50) * 1e-3
        frame = pd.DataFrame({"t": np.arange(1, 51), "r": values, "h": np.log(np.abs(values))})
        with CSVLoader({"file_path": self.path}) as loader:
            self.assertEqual(loader.load(frame), 50)

        restored = read_csv(self.path)
        np.testing.assert_array_equal(restored["r"].to_numpy(), values)
        np.testing.assert_array_equal(restored["h"].to_numpy(), frame["h"].to_numpy())
        self.assertEqual(restored["t"].tolist(), list(range(1, 51)))

    def test_if_exists_fail(self):
        frame = pd.DataFrame({"a": [1.0]})
        CSVLoader({"file_path": self.path}).load(frame)
        with self.assertRaises(FileExistsError):
            CSVLoader({"file_path": self.path, "if_exists": IfExists.FAIL.value}).load(frame)


class TestJSONLoader(unittest.TestCase):
    """JSON Loader 테스트"""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.temp_dir.name, "summary.json")

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_to_jsonable(self):
        data = to_jsonable({
            "kind": ModelKind.CLASSICAL,
            "values": np.array([1.5, np.nan]),
            "count": np.int64(3),
            "flag": np.bool_(True),
            1: float("inf"),
        })
        self.assertEqual(data, {"kind": "svm0", "values": [1.5, None], "count": 3, "flag": True, "1": None})

    def test_write_and_read(self):
        payload = {"value": 0.1 + 0.2, "nested": {"items": [1, 2]}, "missing": float("nan")}
        count = JSONLoader({"file_path": self.path}).load(payload)
        self.assertEqual(count, 3)
        restored = read_json(self.path)
        self.assertEqual(restored["value"], 0.1 + 0.2)
        self.assertIsNone(restored["missing"])
        with open(self.path, "r", encoding="utf-8") as f:
            self.assertIn('  "nested"', f.read())

    def test_output_is_strict_json(self):
        JSONLoader({"file_path": self.path}).load({"x": float("-inf")})
        with open(self.path, "r", encoding="utf-8") as f:
            text = f.read()
        self.assertNotIn("Infinity", text)
        self.assertEqual(json.loads(text), {"x": None})
