import subprocess
import sys

import pytest


@pytest.fixture(scope="session")
def artifact_root(tmp_path_factory):
    """Desk-scale artifacts for fig2/fig3/fig5, produced by the CLI.

    figkit only ever sees these files; the producing tool is exercised
    strictly through its command-line interface.
    """
    root = tmp_path_factory.mktemp("artifacts")
    for figure in ("fig2", "fig3", "fig5"):
        subprocess.run(
            [sys.executable, "-m", "squeezenhse.cli", "reproduce",
             "--figure", figure, "--scale", "desk",
             "--out", str(root / figure)],
            check=True, capture_output=True)
    return root
