import logging

from ltlab.log import setup_logging

setup_logging()
logger = logging.getLogger("ltlab")
