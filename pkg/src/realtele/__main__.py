import sys

from realtele.cli import main

sys.exit(main())
