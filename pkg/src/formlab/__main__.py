import sys

from formlab.cli import main

sys.exit(main())
