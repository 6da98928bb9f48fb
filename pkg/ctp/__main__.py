import sys
from ctp.api.cli import main

sys.exit(main())
