import sys

from nlcast.cli import main

sys.exit(main())
