# Entry point for the pdeforge command line.
import sys

from pdeforge import cli

if __name__ == "__main__":
    sys.exit(cli.main())
