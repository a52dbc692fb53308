#!/usr/bin/env python3
"""End-to-end checks of the reinstab command line: exit codes, CSV shape, JSON schema."""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN, MODELS, SCHEMA = sys.argv[1:4]
FIXTURES = ["example1", "example2", "airc_example", "exponential_example", "logistic_example",
            "feedback_nonlinear"]
EXPECTED_EXIT = {"example1": 0, "example2": 0, "airc_example": 2, "exponential_example": 0,
                 "logistic_example": 0, "feedback_nonlinear": 0}

with open(SCHEMA, encoding="utf-8") as fh:
    VALIDATOR = jsonschema.Draft202012Validator(json.load(fh))

failures = []


def run(*args, env=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=env, timeout=300)


def model(name):
    return os.path.join(MODELS, name + ".json")


def expect(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL:", what)


def check_json(args, code):
    p = run(*args, "--json")
    expect(p.returncode == code, f"{args}: exit {p.returncode}, expected {code}: {p.stderr.strip()}")
    try:
        doc = json.loads(p.stdout)
    except json.JSONDecodeError as e:
        expect(False, f"{args}: stdout is not JSON ({e})")
        return None
    errors = sorted(VALIDATOR.iter_errors(doc), key=lambda e: list(e.path))
    expect(not errors, f"{args}: schema violation {errors[0].message if errors else ''} at "
                       f"{list(errors[0].path) if errors else ''}")
    return doc


for f in FIXTURES:
    code = EXPECTED_EXIT[f]
    check_json(["analyze", model(f)], code)
    check_json(["certify", model(f)], code)
    check_json(["equilibrium", model(f)], 0)
    check_json(["simulate", model(f), "--t-end", "20"], 0)

doc = check_json(["analyze", model("example1")], 0)
if doc:
    expect(doc["certificate"]["verdict"] == "StructurallyStable", "example1 verdict")
    expect(abs(doc["gains"]["g0"] - 2.0) < 1e-12, "example1 g0")
doc = check_json(["analyze", model("example1"), "--set", "r=3"], 2)
if doc:
    expect(doc["certificate"]["verdict"] == "HypothesisFailed", "r=3 verdict")

doc = check_json(["spr", model("example1")], 0)
if doc:
    expect(doc["h_n"]["tag"] == "SPR", "spr tag")
p = run("spr", model("example1"))
expect(p.returncode == 0 and "SPR" in p.stdout and "re_positive" in p.stdout, "spr text table")

with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "sweep.csv")
    p = run("sweep", model("example1"), "--axis", "kp=1e-3:1e3:13log", "--axis", "eta=1e-3:1e3:13log",
            "--out", out)
    expect(p.returncode == 0, f"sweep exit {p.returncode}: {p.stderr.strip()}")
    with open(out, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    expect(len(rows) == 169, f"sweep rows {len(rows)}")
    expect(all(r["verdict"] == "StructurallyStable" and float(r["abscissa"]) < 0 for r in rows),
           "sweep cells all stable")

    out1, out8 = os.path.join(tmp, "t1.csv"), os.path.join(tmp, "t8.csv")
    env = dict(os.environ)
    env["REINSTAB_THREADS"] = "1"
    run("sweep", model("example2"), "--axis", "r=0.5:20:4", "--axis", "kp=0.01:100:3log", "--simulate",
        "--t-end", "30", "--out", out1, env=env)
    env["REINSTAB_THREADS"] = "8"
    run("sweep", model("example2"), "--axis", "r=0.5:20:4", "--axis", "kp=0.01:100:3log", "--simulate",
        "--t-end", "30", "--out", out8, env=env)
    with open(out1, "rb") as a, open(out8, "rb") as b:
        expect(a.read() == b.read(), "sweep CSV differs between thread counts")

    out = os.path.join(tmp, "switch.csv")
    p = run("switching", model("airc_example"), "--eta", "1e0:1e6:7log", "--t-end", "50", "--out", out)
    expect(p.returncode == 0, f"switching exit {p.returncode}: {p.stderr.strip()}")
    with open(out, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    expect(len(rows) == 7 and "z1_predicted" in rows[0], f"switching rows {len(rows)}")
    check_json(["switching", model("airc_example"), "--eta", "1e0:1e6:7log", "--t-end", "20"], 0)
    check_json(["sweep", model("logistic_example"), "--axis", "k=0.1:10:3log"], 0)

    out = os.path.join(tmp, "traj.csv")
    p = run("simulate", model("example1"), "--t-end", "10", "--tol", "1e-7", "--x0", "0.1,0.1,0.1",
            "--out", out)
    expect(p.returncode == 0, f"simulate exit {p.returncode}: {p.stderr.strip()}")
    with open(out, newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh))
    expect(header == ["t", "x1", "x2", "x3", "z1", "z2"], f"trajectory header {header}")

    bad = os.path.join(tmp, "bad.json")
    with open(bad, "w", encoding="utf-8") as fh:
        fh.write("{")
    p = run("analyze", bad)
    expect(p.returncode == 1, f"malformed JSON exit {p.returncode}")
    try:
        err = json.loads(p.stderr)
        expect(err["error"]["code"] == "ParseError", "malformed JSON error code")
    except (json.JSONDecodeError, KeyError):
        expect(False, f"structured error on stderr: {p.stderr!r}")

    nonmetzler = os.path.join(tmp, "nm.json")
    with open(model("example1"), encoding="utf-8") as fh:
        doc = json.load(fh)
    doc["A"][0][1] = -0.5
    with open(nonmetzler, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    p = run("analyze", nonmetzler)
    expect(p.returncode == 1 and "NonMetzler" in p.stderr, f"non-Metzler exit {p.returncode}")

p = run("analyze", model("example1"), "--bogus")
expect(p.returncode == 1, f"unknown flag exit {p.returncode}")
p = run("analyze", model("missing_file"))
expect(p.returncode == 1, f"missing file exit {p.returncode}")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
