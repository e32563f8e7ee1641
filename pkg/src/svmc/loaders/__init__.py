"""
결과 저장 모듈
"""
from svmc.loaders.base import IfExists, Loader
from svmc.loaders.csv import CSVLoader, read_csv
from svmc.loaders.json import JSONLoader, read_json, to_jsonable

__all__ = ["IfExists", "Loader", "CSVLoader", "JSONLoader", "read_csv", "read_json", "to_jsonable"]
