from crlab.cli import main


raise SystemExit(main())
