import subprocess
import sys


def run_cli(*args, cwd=None):
    """Invoke the CLI the way a shell would and capture everything."""
    return subprocess.run(
        [sys.executable, "-m", "revivalqpt", *[str(a) for a in args]],
        capture_output=True, text=True, cwd=cwd,
    )
