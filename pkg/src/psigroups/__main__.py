import sys

from psigroups.cli import main

sys.exit(main())
