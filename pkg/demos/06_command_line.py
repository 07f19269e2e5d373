# The command-line front end, driven from Python.
#
# Same as running, in a shell:
#   pinching-outage sweep --snr-start-db 76 --snr-stop-db 84 --system PASS --user 1
#   pinching-outage reproduce fig6 --out fig6.csv
#   pinching-outage validate --checks conformance

# %%
import tempfile
from pathlib import Path

from pinching_outage.cli import main

main(["sweep", "--snr-start-db", "76", "--snr-stop-db", "84", "--system", "PASS", "--user", "1"])

# %%
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "fig6.csv"
    main(["reproduce", "fig6", "--snr-start-db", "100", "--snr-stop-db", "120", "--snr-step-db", "10",
          "--out", str(out)])
    print(out.read_text())

# %% exit code 0 means every check passed
code = main(["validate", "--checks", "conformance", "--out", str(Path(tempfile.gettempdir()) / "checks.json")])
print("validate exit code", code)
