import sys

from khovanov.cli import main

sys.exit(main())
