import sys

from .family217.cli import main

sys.exit(main())
