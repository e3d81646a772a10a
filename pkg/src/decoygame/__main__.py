import sys

from decoygame.cli import main

sys.exit(main())
