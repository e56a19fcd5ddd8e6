"""
Ingest package：候選資料集、市場快照與中斷事件的檔案讀寫。
"""

from .loaders import CANDIDATE_COLUMNS, dump_candidates, load_candidates, load_events, load_trace

__all__ = ["CANDIDATE_COLUMNS", "dump_candidates", "load_candidates", "load_events", "load_trace"]
