import subprocess
import sys
from pathlib import Path

import pytest

from oss_forge.config import load_config

DEMOS = Path(__file__).resolve().parent.parent / "demos"


@pytest.mark.parametrize("script", sorted(p.name for p in DEMOS.glob("*.py")))
def test_demo_runs(script):
    proc = subprocess.run([sys.executable, str(DEMOS / script)], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr[-2000:]


def test_example_config_validates():
    cfg = load_config(DEMOS / "pipeline.example.yaml", check_paths=False)
    assert cfg.sampling.quota["python"] == 40000 and sum(cfg.sampling.quota.values()) == 80000
