import sys

from marketmap.cli import main

sys.exit(main())
