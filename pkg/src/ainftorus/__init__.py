"""Mapping tori of A-infinity categories over GF(2): presentations,
functors, modules, localization and Koszul duality."""
__version__ = "0.1.0"

from .core import (AinfCategory, AinfCocategory, Augmentation, Split, Unit, check_relations,
                   dump_presentation, load_presentation)

__all__ = ["AinfCategory", "AinfCocategory", "Augmentation", "Split", "Unit", "check_relations",
           "dump_presentation", "load_presentation"]
