"""Iterated three-player quantum game simulator.

The heavy lifting lives in the compiled extension; this package re-exports
its operations.
"""

try:
    from ._qgame import *  # noqa: F401,F403
    from ._qgame import __version__  # noqa: F401
except ImportError:  # the extension sits on PYTHONPATH in build trees
    from _qgame import *  # noqa: F401,F403
    from _qgame import __version__  # noqa: F401
