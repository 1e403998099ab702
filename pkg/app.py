"""
打ち切りデータ密度推定 - コマンドラインエントリポイント
"""
import sys

from src.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
