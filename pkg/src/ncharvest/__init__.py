"""ncharvest: joint harvesting of noun compounds and their paraphrasing
verb patterns from a local corpus."""

from .model import NounCompound, Pattern, Strategy
from .lexicon import Lexicon, InflectedPattern

__version__ = "0.1.0"

__all__ = [
    "NounCompound",
    "Pattern",
    "Strategy",
    "Lexicon",
    "InflectedPattern",
    "__version__",
]
