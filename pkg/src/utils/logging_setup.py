import logging
import sys
import time

LOG_FORMAT = "%(levelname)s %(asctime)s %(name)s %(message)s"


class _UtcFormatter(logging.Formatter):
    converter = time.gmtime

    def formatTime(self, record, datefmt=None):
        ct = self.converter(record.created)
        return time.strftime("%Y-%m-%dT%H:%M:%S", ct) + f".{int(record.msecs):03d}Z"


def setup_logging(level: str = "INFO") -> None:
    """
    Install a single stderr handler emitting `level ts component message` lines.
    Only entry points call this; library modules just use getLogger(__name__).
    Calling it again replaces the handler it installed earlier.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_glselect", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_UtcFormatter(LOG_FORMAT))
    handler._glselect = True
    root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
