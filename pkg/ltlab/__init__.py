# -*- coding: utf-8 -*-
from .runtime import logger  # NOQA

__version__ = "0.1.0"
__author__ = 'ltlab developers'
__license__ = "MIT"
