"""
Saving results and driving runs from the command line
=====================================================

Everything the library computes can be written as one JSON document or as a
set of CSV tables ready for any plotting tool. The ``itmflow`` command wraps
the same calls.
"""

import tempfile
from pathlib import Path

from itmflow import ResultDocument, Secant, itm_solve, read_results, write_results
from itmflow.cli import run_command
from itmflow.problems import sakiadis
from itmflow.results import iteration_table, solution_table

out = Path(tempfile.mkdtemp())

run = itm_solve(sakiadis(), Secant(2.5, 3.5))
doc = ResultDocument.create(
    "solve",
    {"problem": "sakiadis"},
    final={"h_star": run.final_h_star, "skin_friction": run.skin_friction},
    tables={"iterations": iteration_table(run.records), "solution": solution_table(run.physical_solution)},
)
print([p.name for p in write_results(doc, "csv", out / "sakiadis")])
json_path = write_results(doc, "json", out / "sakiadis")[0]
print("round trip equal:", read_results(json_path) == doc)

# %%
# Same run through the CLI entry point: ``itmflow solve sakiadis --output ...``.
code, cli_doc, written = run_command(["solve", "sakiadis", "--output", str(out / "cli")])
print("exit", code, "->", cli_doc.final["skin_friction"], [p.name for p in written])

# %%
# A parameter with no solution exits with status 2, not a crash.
code, _, _ = run_command(["gamma-scan", "moving", "--b", "-0.4"])
print("gamma-scan moving b=-0.4 exit code:", code)
