"""Integration tests for __main__ module."""

import subprocess
import sys
from pathlib import Path

import pytest


@pytest.mark.integration
def test_main_module_runs_as_script() -> None:
    """Test __main__ module can be run as a script."""
    result = subprocess.run(
        [sys.executable, "-m", "coarsequot", "--help"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "Usage:" in result.stdout
    assert "quotient" in result.stdout


@pytest.mark.integration
def test_main_module_constants_command(tmp_path: Path) -> None:
    """Test the constants command writes its report from a subprocess."""
    result = subprocess.run(
        [sys.executable, "-m", "coarsequot", "constants", "-L", "1000", "-o", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
