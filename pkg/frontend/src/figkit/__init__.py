"""figkit: figure rendering from squeezenhse CSV/JSON artifacts.

Strictly read-only over the documented artifact schemas; no physics is
recomputed here.
"""

from .loaders import ArtifactError, load_manifest, read_csv
from .render import render

__all__ = ["ArtifactError", "load_manifest", "read_csv", "render"]

__version__ = "0.1.0"
