"""Digit streams that are normal for a target shift-invariant measure."""

from ._munormal import *  # noqa: F401,F403
from ._munormal import __version__  # noqa: F401
