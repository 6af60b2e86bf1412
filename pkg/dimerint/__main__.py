import sys

from dimerint.cli import main

sys.exit(main())
