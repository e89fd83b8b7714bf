from datetime import datetime
import logging.config
import sys

from . import logging_context, settings


RED = '\033[91m'
GREEN = '\033[92m'
YELLOW = '\033[93m'
BLUE = '\033[94m'
END = '\033[0m'

COLORS = {
    "CRITICAL": RED,
    "ERROR": RED,
    "WARNING": YELLOW,
    "INFO": GREEN,
    "DEBUG": BLUE,
    "NOTSET": END,
    "RED": RED,
    "GREEN": GREEN,
    "YELLOW": YELLOW,
    "BLUE": BLUE,
}

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ColorModes(object):
    AUTO = 'auto'
    ALWAYS = 'always'
    NEVER = 'never'


color_mode = ColorModes.AUTO


def colorize(level, message):
    # if not in a tty, we're likely redirected or piped
    if color_mode == ColorModes.NEVER or (color_mode == ColorModes.AUTO and not sys.stdout.isatty()):
        return message
    return "".join([COLORS[level], message, END])


class LtlabFormatter(logging.Formatter):
    """
    ``ISODATE LEVEL [process=NAME, pid=PID]: [job=J case=C] message``
    """

    def format(self, record):
        # formatTime() isn't ISO8601; microseconds are stripped for readability
        date = datetime.fromtimestamp(record.created).replace(microsecond=0)
        record.isodate = date.isoformat()

        # don't risk bad interpolation if args is empty
        record.message = record.msg % record.args if record.args else record.msg

        record.coloredlevel = colorize(record.levelname, record.levelname)
        parts = ["%(isodate)s %(coloredlevel)s [process=%(processName)s, pid=%(process)s]:" % record.__dict__]
        campaign = logging_context.describe()
        if campaign:
            parts.append(campaign)
        parts.append("{}".format(record.message))
        s = " ".join(parts)

        if record.exc_info and not record.exc_text:
            record.exc_text = self.formatException(record.exc_info)
        if record.exc_text:
            s = s.rstrip("\n") + "\n" + record.exc_text
        return s


def set_level(level):
    """
    Change the level of the ``ltlab`` logger after setup (``--log-level``).
    """
    logging.getLogger("ltlab").setLevel(level.upper())


def setup_logging():
    logging.config.dictConfig(settings.LOGGING)
