import sys

from natureopt.harness.cli import main

sys.exit(main())
