"""python -m core <command>"""

import sys
from pathlib import Path

_root = Path(__file__).resolve().parent.parent
if str(_root) not in sys.path:
    sys.path.insert(0, str(_root))

from core.cli import main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(main())
