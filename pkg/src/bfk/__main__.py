from __future__ import annotations

import sys

from .braidcli import main

sys.exit(main())
