"""
例外クラス定義
"""


class CensoredDensityError(ValueError):
    """本パッケージの基底例外"""

    kind = "error"

    def __init__(self, message: str):
        """
        初期化

        Args:
            message: エラーメッセージ（1行）
        """
        super().__init__(message)
        self.message = message

    def one_line(self) -> str:
        """
        機械可読な1行表現を取得

        Returns:
            "<kind>: <message>" 形式の文字列
        """
        return f"{self.kind}: {self.message}"


class SampleError(CensoredDensityError):
    """観測データの取り込みエラー"""

    kind = "sample"


class KernelError(CensoredDensityError):
    """カーネル評価エラー"""

    kind = "kernel"


class BandwidthError(CensoredDensityError):
    """帯域幅選択エラー"""

    kind = "bandwidth"


class EstimationError(CensoredDensityError):
    """推定量の計算エラー"""

    kind = "estimation"


class PluginError(CensoredDensityError):
    """プラグイン帯域幅の計算エラー"""

    kind = "plugin"


class DesignError(CensoredDensityError):
    """シミュレーション設計の不正"""

    kind = "design"
