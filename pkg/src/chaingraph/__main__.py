import sys

from chaingraph.cli import main

sys.exit(main())
