import sys

from hllab.harness.cli import main

sys.exit(main())
