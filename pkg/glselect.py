from dotenv import load_dotenv
load_dotenv(override=True)

import sys

from src.cli.main import main

if __name__ == '__main__':
    sys.exit(main())
