"""Module entry point: ``python -m wergm``."""

import sys

from .cli import main

sys.exit(main())
