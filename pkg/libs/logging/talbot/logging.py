import logging
import sys
from pathlib import Path
from typing import Optional, Union

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(
    filename: Optional[Union[str, Path]] = None, verbose: bool = False
) -> None:
    """
    Set up logging format in a consistent way across the
    simulator's entry points. Records go to stderr so that
    tables printed on stdout can be piped elsewhere, and calling
    this again replaces the handlers of the previous call.

    Args:
        filename:
            Name of file to which logging messages will
            also be written
        verbose:
            If true, log at `DEBUG` verbosity, otherwise log at
            `INFO` verbosity.
    """
    logging.basicConfig(
        format=LOG_FORMAT,
        level=logging.DEBUG if verbose else logging.INFO,
        stream=sys.stderr,
        force=True,
    )

    logger = logging.getLogger()
    if filename is not None:
        formatter = logging.Formatter(LOG_FORMAT)
        handler = logging.FileHandler(filename=filename, mode="w")
        handler.setFormatter(formatter)
        logger.addHandler(handler)
