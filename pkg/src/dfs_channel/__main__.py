import logging
import sys

from . import VERSION, utils
from .cli import CLI, run

_logger = logging.getLogger(__name__)


def main() -> None:
    args = CLI.parse()

    utils.configure_logging("DEBUG" if args.debug else "INFO", args.log_file)
    _logger.info(f"Version: {VERSION}")
    sys.exit(run(args))


if __name__ == "__main__":
    main()
