"""custom2vec: knowledge-graph embeddings customized by user-preference subgraphs."""

from custom2vec._core import *  # noqa: F401,F403
from custom2vec._core import __version__  # noqa: F401
