"""End-to-end checks of the dimspec CLI binary: exit codes, output schemas,
determinism, and the DIMSPEC_THREADS contract.

Usage: cli_smoke.py <path-to-dimspec-binary> <fixtures-dir>
"""

import json
import math
import os
import subprocess
import sys
import tempfile

BINARY = sys.argv[1]
FIXTURES = sys.argv[2]

failures = 0


def check(name, cond, detail=""):
    global failures
    print(f"{name}: {'ok' if cond else 'FAIL'} {detail}")
    if not cond:
        failures += 1


def run_cli(config_name, *args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    proc = subprocess.run(
        [BINARY, "--config", os.path.join(FIXTURES, config_name), *args],
        capture_output=True,
        text=True,
        env=full_env,
    )
    return proc


# dimension task: JSON output, exit 0, enclosure around log 2 / log 3
proc = run_cli("cantor_dimension.json")
check("cantor exit", proc.returncode == 0, str(proc.returncode))
records = json.loads(proc.stdout)
truth = math.log(2) / math.log(3)
rec = records[0]
check(
    "cantor enclosure",
    rec["outputs"]["h_lo"] <= truth <= rec["outputs"]["h_hi"]
    and rec["outputs"]["h_hi"] - rec["outputs"]["h_lo"] <= 1e-6,
    f"[{rec['outputs']['h_lo']}, {rec['outputs']['h_hi']}]",
)
check("flags present", "guard_band_hits" in rec["flags"] and "converged" in rec["flags"])
check("no timing by default", "wall_time_ms" not in rec)

# determinism, including under a thread cap
curve_a = run_cli("curve.json", "--format", "csv")
curve_b = run_cli("curve.json", "--format", "csv")
curve_threads = run_cli("curve.json", "--format", "csv", env={"DIMSPEC_THREADS": "4"})
check("curve exit", curve_a.returncode == 0, str(curve_a.returncode))
check("curve deterministic", curve_a.stdout == curve_b.stdout)
check("threads do not change output", curve_a.stdout == curve_threads.stdout)
check(
    "curve csv header",
    curve_a.stdout.splitlines()[0] == "beta,h_lo,h_hi,depth,converged",
    curve_a.stdout.splitlines()[0],
)
rows = curve_a.stdout.strip().splitlines()[1:]
check("curve row count", len(rows) == 4, str(len(rows)))
h_los = [float(r.split(",")[1]) for r in rows]
h_his = [float(r.split(",")[2]) for r in rows]
check("curve monotone", all(h_los[i] <= h_his[i + 1] + 1e-9 for i in range(len(rows) - 1)))

# replace task
proc = run_cli("replace.json")
rec = json.loads(proc.stdout)[0]
check("replace result", rec["outputs"]["result"] == "10", rec["outputs"]["result"])
check("replace positions", rec["outputs"]["positions"] == [2])

# validation failure: exit 2, message names the field path
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as bad:
    bad.write('{"system": {"family": "nope"}, "task": {"name": "dimension"}}')
    bad_path = bad.name
proc = subprocess.run(
    [BINARY, "--config", bad_path], capture_output=True, text=True
)
check("validation exit 2", proc.returncode == 2, str(proc.returncode))
check("validation names field", "system.family" in proc.stderr, proc.stderr.strip())
os.unlink(bad_path)

# budget exhaustion: exit 3 with a flagged partial record
proc = run_cli("budget_exhaustion.json")
check("budget exit 3", proc.returncode == 3, str(proc.returncode))
records = json.loads(proc.stdout)
check("budget partial record", len(records) == 1 and not records[0]["flags"]["converged"])

# output file writing
with tempfile.TemporaryDirectory() as tmp:
    out_path = os.path.join(tmp, "out.json")
    proc = run_cli("cantor_dimension.json", "--output", out_path)
    check("output file exit", proc.returncode == 0)
    with open(out_path) as fh:
        check("output file parses", isinstance(json.load(fh), list))

print("cli smoke:", "all checks passed" if failures == 0 else f"{failures} failures")
sys.exit(1 if failures else 0)
