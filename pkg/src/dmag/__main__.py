import sys

from dmag.cli import main

sys.exit(main())
