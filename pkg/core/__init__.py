# Spot instance pool 選擇核心套件 (專案根目錄 core/)
# CLI 入口：python -m core <command>
