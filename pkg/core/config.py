"""
配置管理模組 - 統一管理所有設定
core 位於專案根目錄，project_root = core 的上一層
"""
import logging
import os
from pathlib import Path
from typing import Callable, TypeVar

from dotenv import load_dotenv

# 載入環境變數
load_dotenv()

logger = logging.getLogger(__name__)

T = TypeVar("T")

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env(name: str, default: T, cast: Callable[[str], T]) -> T:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        logger.warning("未知的 %s=%r，改用預設值 %r", name, raw, default)
        return default


class Config:
    """應用程式配置類別"""

    def __init__(self):
        # ==========================================
        # 1. 基礎路徑設定
        # ==========================================
        _core_dir = Path(__file__).resolve().parent
        self.project_root = _core_dir.parent

        # 報表輸出根目錄（只定義根在哪，寫檔時才建立）
        self.data_dir = Path(os.getenv("SPOT_OPT_DATA_DIR", str(self.project_root / "data")))

        # ==========================================
        # 2. Logging
        # ==========================================
        _level = os.getenv("SPOT_OPT_LOG", "WARNING").strip().upper()
        if _level not in _LOG_LEVELS:
            logger.warning("未知的 SPOT_OPT_LOG=%r，改用 WARNING", _level)
            _level = "WARNING"
        self.log_level = _level

        # ==========================================
        # 3. 演算法參數預設值
        # ==========================================
        # GSS 停止門檻；0.01 在搜尋次數與品質間取得平衡
        self.default_epsilon = _env("SPOT_OPT_EPSILON", 0.01, float)
        if not 0.0 < self.default_epsilon < 1.0:
            logger.warning("SPOT_OPT_EPSILON 需介於 (0, 1)，改用 0.01")
            self.default_epsilon = 0.01

        # Unavailable Offerings Cache 的存活秒數（需大於兩分鐘中斷通知）
        self.cache_ttl_sec = _env("SPOT_OPT_CACHE_TTL", 180, int)

        # SpotVerse 基線：(3 - SPS) + IF 超過此值即濾除
        self.spotverse_threshold = _env("SPOT_OPT_SPOTVERSE_THRESHOLD", 3.0, float)

        # α sweep 的格點間距
        self.sweep_step = _env("SPOT_OPT_SWEEP_STEP", 0.01, float)

        # ILP DP 需求維度上限、暴力解上限
        self.max_demand = _env("SPOT_OPT_MAX_DEMAND", 1_000_000, int)
        self.oracle_limit = _env("SPOT_OPT_ORACLE_LIMIT", 10_000_000, int)


    def to_dict(self) -> dict:
        """轉換為字典格式，方便除錯"""
        return {
            "project_root": str(self.project_root),
            "data_dir": str(self.data_dir),
            "log_level": self.log_level,
            "default_epsilon": self.default_epsilon,
            "cache_ttl_sec": self.cache_ttl_sec,
            "spotverse_threshold": self.spotverse_threshold,
            "sweep_step": self.sweep_step,
            "max_demand": self.max_demand,
            "oracle_limit": self.oracle_limit,
        }


# 建立全域配置實例
config = Config()
