"""Main entry point for the geometric regret matching toolkit."""

import logging
import sys
from dotenv import load_dotenv

from geo_regret.cli import parse_command
from geo_regret.config import Config
from geo_regret.pipeline import EXIT_USAGE, Pipeline


def setup_logging(log_level: str) -> None:
    """Configure logging for the application.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
    """
    logging.basicConfig(
        level=getattr(logging, log_level.upper(), logging.INFO),
        format='%(message)s',
        # stdout carries summaries and enumerated equilibria
        handlers=[
            logging.StreamHandler(sys.stderr),
        ]
    )


def main(argv=None) -> int:
    """Parse the command line and run it through the pipeline."""
    # Load environment variables from .env file
    load_dotenv()

    logger = logging.getLogger(__name__)
    try:
        config = Config.from_env()
        setup_logging(config.log_level)
        config.validate()
    except ValueError as e:
        setup_logging("INFO")
        logger.error(f"❌ Configuration error: {e}")
        logger.error("Please check your .env file and the GRM_* environment variables.")
        return EXIT_USAGE

    spec = parse_command(argv)
    pipeline = Pipeline(config)
    return pipeline.execute(spec)


if __name__ == "__main__":
    sys.exit(main())
