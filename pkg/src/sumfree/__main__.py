import sys

from sumfree.cli import main

sys.exit(main())
