import sys

from gvsmooth.cli import main

sys.exit(main())
