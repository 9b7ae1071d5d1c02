# %% [markdown]
# From a score table to a report and plot data
#
# The same steps back the `gainstats analyze` command.

# %%
import json
import tempfile
from pathlib import Path

import gainstats as gs

table = """student_id,cohort,initial,final
s1,A,73,93
s2,A,73,90
s3,A,73,85
s4,A,73,67
t1,B,40,75
t2,B,55,70
t3,B,62,91
t4,B,30,42
"""
dataset = gs.ingest_text(table)
report = gs.run_analysis(dataset)
print(gs.emit_report(report, "text").decode())

# %% [markdown]
# JSON output follows a published schema.

# %%
doc = json.loads(gs.emit_report(report, "json"))
print(list(doc))
print(json.dumps(doc["comparison"], indent=1))

# %% [markdown]
# Plot-ready CSV files (add svg=True with matplotlib installed for images).

# %%
with tempfile.TemporaryDirectory() as tmp:
    for path in gs.emit_plot_data(report, tmp):
        first = Path(path).read_text().splitlines()[0]
        print(f"{Path(path).name:34s} {first[:70]}")

# %% [markdown]
# Bad rows are reported with their line number.

# %%
try:
    gs.ingest_text("student_id,cohort,initial,final\ns1,A,103,93\n")
except gs.ParseError as exc:
    print(type(exc).__name__, exc)
