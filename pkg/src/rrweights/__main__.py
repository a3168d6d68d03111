import sys

from rrweights.cli import main

sys.exit(main())
