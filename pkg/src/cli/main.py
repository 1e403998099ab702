"""
コマンドラインインターフェース

データはファイルへ、JSON要約は標準出力へ、エラーとログは標準エラー出力へ書く。
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from config.settings import (
    BANDWIDTH_SETTINGS,
    CLI_SETTINGS,
    ESTIMATION_SETTINGS,
    KERNEL_SETTINGS,
)
from src.bandwidth.ecf import BandwidthConfig, select_bandwidth
from src.bandwidth.plugin import MISE, MSE, PluginConfig, plugin_bandwidth
from src.estimation.corrections import truncate_renormalize
from src.estimation.density import density, density_derivative
from src.estimation.hazard import HazardConfig, hazard
from src.kernels.flat_top import FlatTopKernel
from src.kernels.gaussian import GaussianKernel
from src.simulation.designs import load_design
from src.simulation.runner import run
from src.survival.io import read_sample, survival_table
from src.utils.errors import CensoredDensityError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 2


class UsageError(Exception):
    """引数エラー"""


class _Parser(argparse.ArgumentParser):
    """エラーを1行で報告するためのパーサー"""

    def error(self, message):
        raise UsageError(message)


def _grid_from(args) -> Optional[np.ndarray]:
    if args.grid_lo is None and args.grid_hi is None:
        if args.grid_count is not None:
            raise UsageError("--grid-count needs --grid-lo and --grid-hi")
        return None
    if args.grid_lo is None or args.grid_hi is None:
        raise UsageError("--grid-lo and --grid-hi must be given together")
    count = ESTIMATION_SETTINGS["grid_count"] if args.grid_count is None else args.grid_count
    if not args.grid_lo < args.grid_hi or count < 2:
        raise UsageError(
            f"grid needs lo < hi and count >= 2, got {args.grid_lo:g}, {args.grid_hi:g}, {count}"
        )
    return np.linspace(args.grid_lo, args.grid_hi, count)


def build_parser() -> argparse.ArgumentParser:
    """
    引数パーサーを構築

    Returns:
        ArgumentParser
    """
    parser = _Parser(
        prog="censored-density",
        description="打ち切りデータの無限次カーネル密度・ハザード推定",
    )
    parser.add_argument("--verbose", action="store_true", help="DEBUGログを出力")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_input(p):
        p.add_argument("--input", type=Path, required=True, help="time,status 形式のCSV")

    def add_bandwidth(p):
        p.add_argument("--c", type=float, default=KERNEL_SETTINGS["c"], help="台形の傾き c")
        p.add_argument(
            "--C", type=float, default=BANDWIDTH_SETTINGS["C"], help="ECF 閾値定数 C"
        )

    def add_estimate(p):
        add_input(p)
        add_bandwidth(p)
        p.add_argument("--out", type=Path, required=True, help="x,value 形式の出力CSV")
        p.add_argument("--h", type=float, default=None, help="固定帯域幅（省略時は自動選択）")
        p.add_argument(
            "--kernel", choices=["flat_top", "gaussian"], default="flat_top", help="カーネル"
        )
        p.add_argument("--grid-lo", type=float, default=None, help="評価グリッドの左端")
        p.add_argument("--grid-hi", type=float, default=None, help="評価グリッドの右端")
        p.add_argument(
            "--grid-count", type=int, default=None, help="評価グリッドの点数（既定 101）"
        )
        p.add_argument("--reflect", action="store_true", help="0 での反射補正")

    p = sub.add_parser(
        "km",
        help="カプラン・マイヤー推定: ジャンプ幅 s_j と生存曲線 Ŝ",
    )
    add_input(p)
    p.add_argument("--out", type=Path, required=True, help="time,status,weight,survival CSV")

    p = sub.add_parser(
        "ecf",
        help="経験特性関数 |φ̂(t)| = |Σ s_j e^{itX_j}| としきい値 C√(log₁₀n/n)",
    )
    add_input(p)
    add_bandwidth(p)
    p.add_argument("--out", type=Path, required=True, help="t,magnitude,threshold CSV")

    p = sub.add_parser(
        "bandwidth",
        help="帯域幅選択: |φ̂| がしきい値を下回り続ける最初の t* から ĥ = 1/t*",
    )
    add_input(p)
    add_bandwidth(p)
    p.add_argument("--out", type=Path, default=None, help="JSON 出力先（任意）")

    p = sub.add_parser("density", help="密度推定 f̂(x) = (1/h)Σ s_j K((x-X_j)/h)")
    add_estimate(p)
    p.add_argument("--truncate", action="store_true", help="負値を切り捨てて再正規化")

    p = sub.add_parser(
        "derivative",
        help="導関数推定 f̂_p(x) = (1/h^{p+1})Σ s_j K^{(p)}((x-X_j)/h)",
    )
    add_estimate(p)
    p.add_argument("--order", type=int, choices=[1, 2], default=1, help="導関数の階数 p")

    p = sub.add_parser(
        "hazard",
        help="ハザード推定 Ĥ(x) = f̂(x) / max(Ŝ̃(x), ε_S)",
    )
    add_estimate(p)
    p.add_argument("--survival-floor", type=float, default=None, help="分母の下限 ε_S")
    p.add_argument("--survival-h", type=float, default=None, help="生存関数平滑化の帯域幅")

    p = sub.add_parser(
        "plugin-bandwidth",
        help="2次カーネルのプラグイン帯域幅 h_MSE / h_MISE（フラットトップパイロットと 1-Ĝ）",
    )
    add_input(p)
    add_bandwidth(p)
    p.add_argument("--mode", choices=[MSE, MISE], required=True, help="点ごと(mse)か大域(mise)か")
    p.add_argument("--x", type=float, default=None, help="mse モードの評価点")
    p.add_argument("--lo", type=float, default=None, help="mise モードの重み区間の下端")
    p.add_argument("--hi", type=float, default=None, help="mise モードの重み区間の上端")
    p.add_argument("--out", type=Path, default=None, help="JSON 出力先（任意）")

    p = sub.add_parser(
        "simulate",
        help="シード付きモンテカルロで MSE・バイアス・分散を集計",
    )
    p.add_argument("--config", type=Path, required=True, help="設計 JSON")
    p.add_argument("--out", type=Path, default=None, help="レポート JSON 出力先")
    p.add_argument("--seed", type=int, default=None, help="乱数シード（省略時は設計のシード）")
    p.add_argument("--reps", type=int, default=None, help="反復回数の上書き")
    p.add_argument("--n", type=int, default=None, help="サンプルサイズの上書き")
    p.add_argument("--workers", type=int, default=None, help="並列プロセス数")

    return parser


def _write_csv(df: pd.DataFrame, path: Path):
    df.to_csv(path, index=False, float_format=CLI_SETTINGS["float_format"], encoding="utf-8")
    logger.info("出力しました: %s", path)


def _write_json(data: dict, path: Path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
    logger.info("出力しました: %s", path)


def _emit(data: dict):
    sys.stdout.write(json.dumps(data, ensure_ascii=False) + "\n")


def _kernel(args):
    if args.kernel == "gaussian":
        return GaussianKernel()
    return FlatTopKernel(args.c)


def _bandwidth(args, sample) -> float:
    if args.h is not None:
        return args.h
    if args.kernel == "gaussian":
        raise UsageError("--h is required with the gaussian kernel")
    return select_bandwidth(sample, BandwidthConfig(C=args.C))[1]


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".json")


def cmd_km(args) -> dict:
    sample = read_sample(args.input)
    _write_csv(survival_table(sample), args.out)
    return {"n": sample.n, "censoring_fraction": sample.censoring_fraction}


def cmd_ecf(args) -> dict:
    sample = read_sample(args.input)
    _, _, curve = select_bandwidth(sample, BandwidthConfig(C=args.C))
    table = pd.DataFrame(
        {
            "t": curve.t_grid,
            "magnitude": curve.magnitude,
            "threshold": np.full(len(curve.t_grid), curve.threshold),
        }
    )
    _write_csv(table, args.out)
    return curve.summary()


def cmd_bandwidth(args) -> dict:
    sample = read_sample(args.input)
    _, _, curve = select_bandwidth(sample, BandwidthConfig(C=args.C))
    summary = curve.summary()
    if args.out is not None:
        _write_json(summary, args.out)
    return summary


def _finish_estimate(grid, args) -> dict:
    _write_csv(grid.to_frame(), args.out)
    meta = grid.metadata()
    _write_json(meta, _sidecar(args.out))
    return meta


def cmd_density(args) -> dict:
    sample = read_sample(args.input)
    kernel = _kernel(args)
    grid = density(sample, kernel, _bandwidth(args, sample), args.grid, args.reflect)
    if args.truncate:
        grid = truncate_renormalize(grid, sample, kernel)
    return _finish_estimate(grid, args)


def cmd_derivative(args) -> dict:
    sample = read_sample(args.input)
    grid = density_derivative(
        sample, _kernel(args), _bandwidth(args, sample), args.order, args.grid, args.reflect
    )
    return _finish_estimate(grid, args)


def cmd_hazard(args) -> dict:
    sample = read_sample(args.input)
    h = _bandwidth(args, sample)
    options = {"survival_bandwidth": args.survival_h}
    if args.survival_floor is not None:
        options["survival_floor"] = args.survival_floor
    grid = hazard(sample, _kernel(args), h, HazardConfig(**options), args.grid, args.reflect)
    return _finish_estimate(grid, args)


def cmd_plugin_bandwidth(args) -> dict:
    sample = read_sample(args.input)
    config = PluginConfig(
        mode=args.mode,
        x=args.x,
        lo=args.lo,
        hi=args.hi,
        kernel_c=args.c,
        bandwidth_config=BandwidthConfig(C=args.C),
    )
    summary = plugin_bandwidth(sample, config).summary()
    if args.out is not None:
        _write_json(summary, args.out)
    return summary


def cmd_simulate(args) -> dict:
    design = load_design(args.config).with_overrides(
        seed=args.seed, reps=args.reps, n=args.n, workers=args.workers
    )
    report = run(design).to_dict()
    if args.out is not None:
        _write_json(report, args.out)
    return {
        "design": design.name,
        "grid_mse_x1000": report["grid_mse_x1000"],
        "points": {str(p["x"]): p["mse_x1000"] for p in report["points"]},
        "failures": report["failures"],
    }


COMMANDS = {
    "km": cmd_km,
    "ecf": cmd_ecf,
    "bandwidth": cmd_bandwidth,
    "density": cmd_density,
    "derivative": cmd_derivative,
    "hazard": cmd_hazard,
    "plugin-bandwidth": cmd_plugin_bandwidth,
    "simulate": cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    メイン関数

    Args:
        argv: コマンドライン引数（省略時は sys.argv）

    Returns:
        終了ステータス
    """
    try:
        args = build_parser().parse_args(argv)
        if hasattr(args, "grid_lo"):
            args.grid = _grid_from(args)
    except UsageError as e:
        sys.stderr.write(f"error: usage: {e}\n")
        return EXIT_ERROR

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        summary = COMMANDS[args.subcommand](args)
    except CensoredDensityError as e:
        sys.stderr.write(f"error: {e.one_line()}\n")
        return EXIT_ERROR
    except UsageError as e:
        sys.stderr.write(f"error: usage: {e}\n")
        return EXIT_ERROR
    except FileNotFoundError as e:
        sys.stderr.write(f"error: io: {e}\n")
        return EXIT_ERROR

    _emit(summary)
    return EXIT_OK
