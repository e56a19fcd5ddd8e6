"""
檔案管理模組 - 統一處理報表輸出路徑與儲存邏輯 (data/{run}/output)
base 目錄由 core.config 的 SPOT_OPT_DATA_DIR 決定；目錄在第一次寫檔時才建立。
"""
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

import pandas as pd

logger = logging.getLogger(__name__)


class FileManager:
    """統一的檔案管理器"""

    def __init__(self, data_dir: Optional[str] = None):
        if data_dir is None:
            from core.config import config

            self.data_dir = config.data_dir
        else:
            self.data_dir = Path(data_dir)

    def get_run_dir(self, run_name: str) -> Path:
        return self.data_dir / run_name

    def get_output_dir(self, run_name: str) -> Path:
        return self.get_run_dir(run_name) / "output"

    def get_output_file_path(self, run_name: str, filename: str) -> Path:
        output_dir = self.get_output_dir(run_name)
        output_dir.mkdir(parents=True, exist_ok=True)
        return output_dir / filename

    def save_json(self, data: Any, file_path: Path, backup: bool = True) -> bool:
        """寫入 JSON；backup=True 且檔案已存在時先改名為 .bak_<ts>.json。"""
        try:
            file_path = Path(file_path)
            file_path.parent.mkdir(parents=True, exist_ok=True)
            if backup and file_path.exists():
                ts = int(datetime.now().timestamp())
                backup_path = file_path.with_suffix(f".bak_{ts}.json")
                file_path.rename(backup_path)
            with open(file_path, "w", encoding="utf-8") as f:
                json.dump(data, f, ensure_ascii=False, indent=2)
                f.write("\n")
            return True
        except (OSError, TypeError, ValueError) as e:
            logger.error("Save JSON Error: %s", e)
            return False

    def load_json(self, file_path: Path) -> Optional[Any]:
        try:
            file_path = Path(file_path)
            if not file_path.exists():
                return None
            with open(file_path, "r", encoding="utf-8") as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error("Load JSON Error: %s", e)
            return None

    def save_table(self, frame: pd.DataFrame, file_path: Path) -> bool:
        """以逗號分隔輸出扁平表格（不含 index），給畫圖用。"""
        try:
            file_path = Path(file_path)
            file_path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(file_path, index=False)
            return True
        except OSError as e:
            logger.error("Save table Error: %s", e)
            return False


file_manager = FileManager()
