"""
User-facing reporting of mvkit exceptions on the command line.

Exceptions raised by the mvkit package describe bad input (or, for an
:py:exc:`~mvkit.diagrams.ExactnessFailure`, a falsified claim) and are shown
as a one-line message plus any notes. Anything else is a bug and keeps its
traceback.
"""

from typing import Iterator

import sys
import re
from contextlib import contextmanager
from traceback import format_exception_only

from mvkit.diagrams import ExactnessFailure

module = __name__.partition(".")[0]

INPUT_ERROR = 2
EXACTNESS_FAILURE = 1


def format_mvkit_exception(exc: BaseException) -> str:
    """'ClassName: message' followed by one line per note."""
    msg = "".join(format_exception_only(exc))
    return re.sub(
        r"^" + re.escape(module) + r"[^:]*\.([^.:]+):",
        r"\1:",
        msg,
    )


@contextmanager
def mvkit_exception_formatting(code: int = INPUT_ERROR) -> Iterator[None]:
    """
    Print mvkit exceptions to stderr without a traceback and exit: with
    EXACTNESS_FAILURE for an ExactnessFailure, otherwise with the given code.

    Other exceptions are not caught and are allowed to bubble through.
    """
    try:
        yield
    except Exception as exc:
        if getattr(exc, "__module__", "").partition(".")[0] != module:
            raise
        print(format_mvkit_exception(exc), end="", file=sys.stderr)
        sys.exit(EXACTNESS_FAILURE if isinstance(exc, ExactnessFailure) else code)
