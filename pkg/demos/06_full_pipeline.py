"""
Running the whole pipeline
==========================

Build a self-contained fixture (corpus, benchmark descriptors, planted teacher
replies, config), run every stage through the CLI, and read the ledger.
"""

import json
import tempfile
from pathlib import Path

from oss_forge.cli import main
from oss_forge.fixtures import build_pipeline_fixture

root = Path(tempfile.mkdtemp(prefix="oss-forge-pipeline-"))
config = build_pipeline_fixture(root)
print(config.read_text())

# %%
# Equivalent to: oss-forge all --config <config>
assert main(["all", "--config", str(config)]) == 0

# %%
report = json.loads((root / "out" / "report" / "report.json").read_text())
for check in report["ledger"]:
    print(f"{check['identity']:<40} {check['lhs']:>4} = {check['rhs']:<4} {'ok' if check['ok'] else 'MISMATCH'}")

manifest = json.loads((root / "out" / "dataset.manifest.json").read_text())
print("exported:", manifest["sample_count"], "fences:", manifest["fence_counts"])

# %%
# A second run skips every stage: outputs are current for this config.
assert main(["all", "--config", str(config)]) == 0
