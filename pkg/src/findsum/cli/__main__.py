import sys

from findsum.cli import main

sys.exit(main())
