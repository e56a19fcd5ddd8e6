# 共用層：報表輸出路徑／檔案邏輯（file_manager）
