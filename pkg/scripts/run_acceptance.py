"""Run the acceptance criteria and print the PASS/FAIL table."""
import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parent.parent
proc = subprocess.run([sys.executable, "-m", "pytest", str(root / "tests" / "test_acceptance.py"), "-q", "-s"],
                      capture_output=True, text=True)
lines = [ln for ln in proc.stdout.splitlines() if ln.startswith("ACCEPTANCE")]
print("\n".join(lines) if lines else proc.stdout + proc.stderr)
sys.exit(proc.returncode)
