import sys

from peterlin.cli import main


sys.exit(main())
