"""
システム設定ファイル
"""
from pathlib import Path

# プロジェクトルートディレクトリ
BASE_DIR = Path(__file__).parent.parent

# 同梱のシミュレーション設計ファイル
DESIGNS_DIR = BASE_DIR / "config" / "designs"

# フラットトップカーネル設定
KERNEL_SETTINGS = {
    "c": 4.0,  # 台形の傾き
    "taylor_threshold": 1e-3,  # |x|がこれ未満ならテイラー展開を使う
    # 導関数の閉形式は x^{-(p+2)} の桁落ちが大きいため切り替えを広げる
    "derivative_taylor_thresholds": {1: 2e-2, 2: 5e-2},
}

# 経験特性関数による帯域幅選択の設定
BANDWIDTH_SETTINGS = {
    "C": 2.0,  # 閾値定数
    "grid_points": 400,  # t_max = grid_points * t_step
    "t_step_factor": 0.25,  # t_step = t_step_factor / 重み付き標準偏差
}

# ハザード推定設定
HAZARD_SETTINGS = {
    "survival_floor": 0.05,  # 分母の下限
}

# 推定グリッド設定
ESTIMATION_SETTINGS = {
    "grid_count": 101,  # 既定の評価点数
    "grid_padding": 3.0,  # [X_1 - 3h, X_n + 3h]
    "mass_padding": 100.0,  # 質量計算時のグリッド拡張（h単位）。K の裾は 1/x² で減衰
    "mass_step": 0.05,  # 質量計算グリッドの刻み（h単位）
}

# プラグイン帯域幅設定
PLUGIN_SETTINGS = {
    "weight_lower_percentile": 5.0,
    "weight_upper_percentile": 95.0,
    "simpson_points": 201,
}

# モンテカルロシミュレーション設定
SIMULATION_SETTINGS = {
    "reps": 2000,
    "seed": 20240101,
    "workers": 1,
    "mse_scale": 1e3,  # MSEは10^3倍で報告
}

# CLI設定
CLI_SETTINGS = {
    "float_format": "%.17g",  # 往復しても値が変わらない桁数
    "seed": 20240101,
}
