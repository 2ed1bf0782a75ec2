import sys

from entlinks.main import main

sys.exit(main())
