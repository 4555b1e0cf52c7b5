"""Log level is read from the LOGLEVEL environment variable.

CRITICAL 50
ERROR 40
WARNING 30
INFO 20
DEBUG 10
NOTSET 0

Records go to standard error, standard output is reserved for data.
"""
import logging
import os
import sys

logging.basicConfig(
    level=os.environ.get("LOGLEVEL", "WARNING").upper(),
    stream=sys.stderr,
    format="%(levelname)s %(name)s: %(message)s",
)
log = logging.getLogger("city_polarity")
