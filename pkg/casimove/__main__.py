from casimove.cli import main

raise SystemExit(main())
