import sys

from holoqutrit.harness.cli import main

sys.exit(main())
