"""
打ち切りデータのCSV入出力
"""
import logging
import math
from pathlib import Path
from typing import List, Tuple

import pandas as pd

from config.settings import CLI_SETTINGS
from src.survival.kaplan_meier import CensoredSample, ingest, survival_curve, survival_eval
from src.utils.errors import SampleError

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ["time", "status"]


def read_records(path: Path) -> List[Tuple[float, bool]]:
    """
    `time,status` 形式のCSVを読み込む

    Args:
        path: CSVファイルパス

    Returns:
        (time, event) のリスト
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input file not found: {path}")

    try:
        df = pd.read_csv(
            path, dtype=str, encoding="utf-8", skipinitialspace=True, keep_default_na=False
        )
    except pd.errors.EmptyDataError:
        raise SampleError("empty sample")
    except pd.errors.ParserError as e:
        raise SampleError(f"malformed csv: {str(e).splitlines()[0]}")

    columns = [c.strip() for c in df.columns]
    if columns != REQUIRED_COLUMNS:
        raise SampleError(
            f"line 1: header must be 'time,status', got '{','.join(columns)}'"
        )

    records = []
    # 1行目はヘッダ
    for line_no, (time_text, status_text) in enumerate(
        df.itertuples(index=False, name=None), start=2
    ):
        try:
            time = float(time_text)
        except (TypeError, ValueError):
            raise SampleError(f"line {line_no}: invalid observation '{time_text}'")
        if not math.isfinite(time):
            raise SampleError(f"line {line_no}: invalid observation '{time_text}'")

        status = str(status_text).strip()
        if status not in ("0", "1"):
            raise SampleError(f"line {line_no}: status must be 0 or 1, got '{status}'")
        records.append((time, status == "1"))

    logger.info("%d 件の観測を読み込みました: %s", len(records), path)
    return records


def read_sample(path: Path) -> CensoredSample:
    """
    CSVを読み込んでサンプルを作成

    Args:
        path: CSVファイルパス

    Returns:
        CensoredSample
    """
    return ingest(read_records(path))


def write_records(records: List[Tuple[float, bool]], path: Path):
    """
    観測を `time,status` 形式で書き出す

    Args:
        records: (time, event) のリスト
        path: 出力先
    """
    df = pd.DataFrame(
        {
            "time": [t for t, _ in records],
            "status": [int(bool(d)) for _, d in records],
        }
    )
    df.to_csv(path, index=False, float_format=CLI_SETTINGS["float_format"])


def survival_table(sample: CensoredSample) -> pd.DataFrame:
    """
    KM推定結果の表を作成

    Args:
        sample: CensoredSample

    Returns:
        time, status, weight, survival 列を持つDataFrame
    """
    curve = survival_curve(sample)
    return pd.DataFrame(
        {
            "time": sample.times,
            "status": sample.events.astype(int),
            "weight": sample.weights,
            "survival": survival_eval(curve, sample.times),
        }
    )
