# src/main.py
# sturmkit command-line entry point
# Results go to stdout, diagnostics to stderr, audit lines to logs/sturmkit.log

import os
import sys
import logging

from dotenv import load_dotenv

# Make src/ importable when run as a script: python src/main.py ...
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

load_dotenv()  # may set STURMKIT_PRECISION

from lib.config_loader import get_setting
from lib.run_logger import create_file_logger, make_run_auditor
from sturmkit import cli


def main():
    logging.basicConfig(
        level=getattr(logging, str(get_setting("logging.level", "INFO")).upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )
    run_logger = create_file_logger("sturmkit_runs", get_setting("logging.file", "sturmkit.log"))
    return cli.main(sys.argv[1:], audit=make_run_auditor(run_logger))


if __name__ == "__main__":
    sys.exit(main())
