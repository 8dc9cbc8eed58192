import sys

from voichain.cli import main

sys.exit(main())
