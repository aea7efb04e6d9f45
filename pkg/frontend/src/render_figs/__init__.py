"""Figure rendering for the gmmlab experiment CSV outputs."""

from .render import RenderError, render
from .specs import FIGURE_IDS, FIGURE_SPECS

__all__ = ["render", "RenderError", "FIGURE_IDS", "FIGURE_SPECS"]
__version__ = "0.1.0"
