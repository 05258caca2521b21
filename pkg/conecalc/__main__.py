import sys

from conecalc.cli import main

sys.exit(main())
