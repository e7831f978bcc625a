"""End-to-end checks of the embedlog executable.

Usage: cli_test.py <embedlog binary> <source dir>
"""

import json
import math
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

EXE = sys.argv[1]
ROOT = Path(sys.argv[2])
SCHEMA = json.loads((ROOT / "docs" / "report-schema.json").read_text())
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)

TEN_DECIMAL = [
    [0.1428588867, 0.3571393697, 0.3571463443, 0.1428553993],
    [0.1428588866, 0.3571411134, 0.3571446008, 0.1428553992],
    [0.1428553992, 0.3571446008, 0.3571411134, 0.1428588866],
    [0.1428553993, 0.3571463443, 0.3571393697, 0.1428588867],
]
LOG_MINUS_ONE = [[-21, 4, 16, 1], [7, -9, 1, 1], [1, 1, -9, 7], [1, 16, 4, -21]]
PRINCIPAL = [[-17, 12, 8, -3], [3, -13, 5, 5], [5, 5, -13, 3], [-3, 8, 12, -17]]
L_REFERENCE = [[-26, 17, 13, -4], [4, -14, 4, 6], [6, 4, -14, 4], [-4, 13, 17, -26]]
R_REFERENCE = [[-30, 25, 5, 0], [0, -10, 0, 10], [10, 0, -10, 0], [0, 5, 25, -30]]

failures = []


def check(name, cond, detail=""):
    print(("PASS " if cond else "FAIL ") + name + (f": {detail}" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("EMBEDLOG_TOL", None)
    full_env.update(env or {})
    return subprocess.run([EXE, *args], capture_output=True, text=True, env=full_env)


def run_json(*args, env=None):
    p = run(*args, env=env)
    doc = json.loads(p.stdout)
    errors = list(VALIDATOR.iter_errors(doc))
    check(f"schema: {' '.join(args[:2])}", not errors, errors[0].message if errors else "")
    return p.returncode, doc


def write_csv(path, rows, scale=1.0):
    path.write_text("\n".join(",".join(repr(x * scale) for x in r) for r in rows) + "\n")
    return str(path)


def swap_middle(m):
    perm = [0, 2, 1, 3]
    return [[m[perm[i]][perm[j]] for j in range(4)] for i in range(4)]


def max_diff(a, b):
    return max(abs(a[i][j] - b[i][j]) for i in range(4) for j in range(4))


def quarter_pi(rows):
    return [[x * math.pi / 4 for x in r] for r in rows]


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    ten = write_csv(tmp / "ten_decimal.csv", TEN_DECIMAL)

    code, doc = run_json("classify", "-i", ten)
    check("classify ten-decimal: exit 0", code == 0)
    check("classify ten-decimal: generators [-1]", doc["generators"] == [-1], doc["generators"])
    check("classify ten-decimal: principal not a generator", doc["principal_is_generator"] is False)

    (tmp / "ten_decimal.json").write_text(json.dumps({"matrix": TEN_DECIMAL}))
    code, doc = run_json("classify", "-i", str(tmp / "ten_decimal.json"))
    check("classify json input", code == 0 and doc["generators"] == [-1])

    pretty = run("classify", "-i", ten, "--pretty")
    check("classify --pretty", pretty.returncode == 0 and "verdict: embeddable" in pretty.stdout)

    identity = write_csv(tmp / "identity.csv", [[float(i == j) for j in range(4)] for i in range(4)])
    code, doc = run_json("classify", "-i", identity)
    check("identity: exit 2 SpectrumOutOfClass", code == 2 and doc["error"]["code"] == "SpectrumOutOfClass")

    (tmp / "short.csv").write_text("1,0,0,0\n0,1,0,0\n0,0,1,0\n")
    code, doc = run_json("classify", "-i", str(tmp / "short.csv"))
    check("three rows: exit 2 ParseError", code == 2 and doc["error"]["code"] == "ParseError")

    code, doc = run_json("classify", "-i", ten, env={"EMBEDLOG_TOL": "bogus=1"})
    check("bad EMBEDLOG_TOL: exit 2", code == 2 and doc["error"]["code"] == "InvalidArgument")
    code, doc = run_json("classify", "-i", ten, env={"EMBEDLOG_TOL": "entry=1e-11"})
    check("EMBEDLOG_TOL applied", code == 0 and doc["tolerances"]["entry"] == 1e-11)
    code, doc = run_json("classify", "-i", ten, "--tol", "2e-12")
    check("--tol float sets entry", doc["tolerances"]["entry"] == 2e-12)

    code, doc = run_json("branches", "-i", ten, "--from", "-3", "--to", "1")
    check("branches range", code == 0 and [b["k"] for b in doc["branches"]] == [-3, -2, -1, 0, 1])
    b0 = next(b for b in doc["branches"] if b["k"] == 0)
    check("branches: Log_0 corner negative", b0["matrix"][0][3] < 0 and not b0["is_rate"])

    # Example family: the generated matrix is the ten-decimal one with states 2 and 3 relabelled.
    code, doc = run_json("generate", "example", "--l", "-1")
    check("generate example: exit 0", code == 0)
    check("generate example: generators [-1]", doc["report"]["generators"] == [-1])
    check("generate example: generator is Log_-1",
          max_diff(doc["generator"], quarter_pi(LOG_MINUS_ONE)) <= 1e-12)
    err = max_diff(swap_middle(doc["matrix"]), TEN_DECIMAL)
    check("generate example: relabelled ten-decimal matrix within 5e-10", err <= 5e-10, err)

    out = tmp / "ex"
    p = run("generate", "example", "--l", "-1", "-o", str(out))
    check("generate example -o", p.returncode == 0 and (out / "matrix.json").exists())
    m = json.loads((out / "matrix.json").read_text())["matrix"]
    check("written matrix equals stdout matrix", m == doc["matrix"])
    p = run("verify", "-i", str(out / "matrix.json"), "-g", str(out / "generator.json"))
    check("verify generated pair: exit 0", p.returncode == 0)

    # verify
    swapped_log = write_csv(tmp / "log_swapped.csv", swap_middle(quarter_pi(LOG_MINUS_ONE)))
    code, doc = run_json("verify", "-i", ten, "-g", swapped_log)
    check("verify ten-decimal with relabelled Log_-1: exit 0", code == 0 and doc["ok"])
    plain_log = write_csv(tmp / "log.csv", LOG_MINUS_ONE, math.pi / 4)
    code, doc = run_json("verify", "-i", ten, "-g", plain_log)
    check("verify ten-decimal with unrelabelled Log_-1: exit 1", code == 1 and not doc["ok"])
    principal = write_csv(tmp / "principal.csv", PRINCIPAL, math.pi / 4)
    code, doc = run_json("verify", "-i", ten, "-g", principal)
    check("verify principal log: NegativeOffDiagonal at (1,4)",
          code == 1 and doc["error"]["code"] == "NegativeOffDiagonal" and "(1,4)" in doc["error"]["message"])
    zero = write_csv(tmp / "zero.csv", [[0.0] * 4 for _ in range(4)])
    code, doc = run_json("verify", "-i", identity, "-g", zero)
    check("verify identity and zero: exit 0", code == 0)

    # Strand-symmetric model
    theta = "1.5707963267948966"
    code, doc = run_json("generate", "ssm", "--theta", theta, "--k", "1", "--weights", "0.25,0.25,0.5",
                         "--shift", "0")
    check("generate ssm shift 0: reference L", max_diff(doc["L"], quarter_pi(L_REFERENCE)) <= 1e-12)
    check("generate ssm shift 0: reference R", max_diff(doc["R"], quarter_pi(R_REFERENCE)) <= 1e-12)
    check("generate ssm shift 0: boundary point", doc["cone"]["in_C1"] and doc["cone"]["binding"])
    code, doc = run_json("generate", "ssm", "--theta", theta, "--k", "1", "--weights", "0.25,0.25,0.5",
                         "--shift", "1")
    check("generate ssm shift 1: interior", code == 0 and doc["cone"]["in_C1"] and not doc["cone"]["binding"])
    check("generate ssm shift 1: branch 1 generates", 1 in doc["report"]["generators"])
    code, doc = run_json("generate", "ssm", "--theta", "0", "--k", "1")
    check("generate ssm theta 0: exit 2", code == 2 and doc["error"]["code"] == "InvalidArgument")
    code, doc = run_json("generate", "ssm", "--theta", "1", "--k", "0")
    check("generate ssm k 0: exit 2", code == 2 and doc["error"]["code"] == "KZero")

    # Perturbed family: determinism
    a, b = tmp / "pa", tmp / "pb"
    for d in (a, b):
        run("generate", "perturbed", "--l", "2", "--seed", "7", "--kappa", "1e-3", "--count", "3", "-o", str(d))
    files = sorted(f.name for f in a.iterdir())
    check("perturbed bundle written", "report.json" in files and len(files) == 7, files)
    check("perturbed outputs byte-identical",
          all((a / f).read_bytes() == (b / f).read_bytes() for f in files))
    code, doc = run_json("generate", "perturbed", "--l", "2", "--seed", "7", "--kappa", "1e-3")
    s1 = run("generate", "perturbed", "--l", "2", "--seed", "7", "--kappa", "1e-3").stdout
    s2 = run("generate", "perturbed", "--l", "2", "--seed", "7", "--kappa", "1e-3").stdout
    check("perturbed stdout byte-identical", s1 == s2)
    check("perturbed certified", code == 0 and all(i["certified"] for i in doc["instances"]))
    check("perturbed generators [2]", all(i["report"]["generators"] == [2] for i in doc["instances"]))
    s3 = run("generate", "perturbed", "--l", "2", "--seed", "8", "--kappa", "1e-3").stdout
    check("different seed differs", s3 != s1)
    code, doc = run_json("generate", "perturbed", "--l", "9")
    check("l out of range: exit 2", code == 2 and doc["error"]["code"] == "LOutOfRange")

    # Fidelity: shortest decimals re-read as the same doubles
    csv_dir = tmp / "csv"
    run("generate", "example", "--l", "1", "--format", "csv", "-o", str(csv_dir))
    rows = [[float(x) for x in line.split(",")]
            for line in (csv_dir / "matrix.csv").read_text().splitlines() if line and not line.startswith("#")]
    _, doc = run_json("generate", "example", "--l", "1")
    check("csv output round-trips", rows == doc["matrix"])

    p = run("selftest")
    check("selftest: exit 0", p.returncode == 0 and "FAIL" not in p.stdout, p.stdout)

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
