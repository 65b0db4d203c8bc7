from __future__ import annotations

import sys

from periodic_xy.cli import main

sys.exit(main())
