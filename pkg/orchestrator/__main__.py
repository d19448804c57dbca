import sys

from orchestrator.orchestrator import main

sys.exit(main())
