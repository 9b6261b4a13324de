"""Module entry point: python -m salsa_eval."""

import sys

from .cli import main

sys.exit(main())
