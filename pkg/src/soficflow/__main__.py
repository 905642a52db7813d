import sys

from soficflow.cli import main

sys.exit(main())
