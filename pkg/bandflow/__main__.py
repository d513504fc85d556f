import sys

from bandflow.cli import main

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("Exiting...")
        sys.exit(130)
