import sys

from pnpl.cli import main

sys.exit(main())
