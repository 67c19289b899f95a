import sys

from ilpath.cli import main

sys.exit(main())
