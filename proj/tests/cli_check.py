"""End-to-end checks of the speclite CLI: exit codes, report schema, determinism.

usage: cli_check.py <speclite binary> <source dir>
"""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN, SRC = sys.argv[1], sys.argv[2]
SCHEMA = json.load(open(os.path.join(SRC, "report.schema.json")))
jsonschema.Draft7Validator.check_schema(SCHEMA)

failures = []


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("SPECLITE_SEED", None)
    if env:
        e.update(env)
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=e, cwd=SRC)
    return p.returncode, p.stdout, p.stderr


def report(*args, env=None):
    code, out, err = run(*args, "--json", env=env)
    try:
        doc = json.loads(out)
    except json.JSONDecodeError:
        check(False, f"{args}: no JSON on stdout (exit {code}, stderr {err!r})")
        return code, None
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        check(False, f"{args}: schema violation: {e.message}")
    check(doc["exit_code"] == code, f"{args}: exit_code field {doc['exit_code']} != {code}")
    return code, doc


def check(cond, msg):
    if not cond:
        failures.append(msg)


def untimed(doc):
    d = dict(doc)
    d.pop("timing", None)
    return json.dumps(d, sort_keys=True)


# impls / parse
code, doc = report("impls")
check(code == 0 and len(doc["impls"]) >= 12, "impls lists the registry")
code, doc = report("parse", "queue.mli.spec")
check(code == 0, "parse queue spec")
check("transfer" in [d["name"] for d in doc["parse"]["declarations"]], "parse lists transfer")

# analyze
code, doc = report("analyze", "graph.mli.spec")
check(code == 0, f"analyze graph spec exits 0, got {code}")
decls = {d["name"]: d for d in doc["analysis"]["declarations"]}
check(not decls["has_path"]["exec"]["executable"], "has_path flagged non-executable")
check(decls["has_path"]["exec"]["findings"][0]["reason"] == "unbounded-existential", "has_path reason")
check(decls["is_path"]["exec"]["executable"], "is_path executable")
for spec in ["queue.mli.spec", "queue_ortac.mli.spec", "hashtbl.mli.spec", "hashtbl_ext.mli.spec"]:
    code, doc = report("analyze", spec)
    check(code == 0, f"analyze {spec}")
    for d in doc["analysis"]["declarations"]:
        check(d["exec"]["executable"], f"{spec}: {d['name']} executable")
code, doc = report("analyze", "queue.mli.spec")
stm = {d["name"]: d["stm"] for d in doc["analysis"]["declarations"]}
check(stm["transfer"] == {"compatible": False, "constructor": False, "reason": "multiple SUT parameters"},
      f"transfer STM verdict {stm['transfer']}")
check(stm["create"]["constructor"], "create is a constructor")

# test: reference, mutant, determinism, seed handling
code, ref = report("test", "queue.mli.spec", "--impl", "queue_two_list", "--seed", "7", "--count", "1000")
check(code == 0 and ref["test"]["passed"] == 1000 and ref["test"]["failure"] is None, "reference queue passes")
code, again = report("test", "queue.mli.spec", "--impl", "queue_two_list", "--seed", "7", "--count", "1000")
check(untimed(ref) == untimed(again), "identical runs give identical reports")

code, q3 = report("test", "queue.mli.spec", "--impl", "mutant_Q3", "--seed", "7", "--count", "5000")
check(code == 1, f"Q3 exits 1, got {code}")
check(q3["test"]["shrunk"]["text"] == "[create (); pop s0]", f"Q3 shrunk to {q3['test']['shrunk']['text']}")
check(q3["test"]["shrunk"]["verdict"]["span"]["line"] > 0, "shrunk verdict names a clause span")
code, human, _ = run("test", "queue.mli.spec", "--impl", "mutant_Q3", "--seed", "7", "--count", "5000")
check(code == 1 and "shrunk: [create (); pop s0]" in human, "human mode agrees with JSON on Q3")
check(q3["test"]["failure"]["verdict"]["kind"] in human, "human mode names the verdict kind")

code, env7 = report("test", "queue.mli.spec", "--impl", "queue_two_list", "--count", "1000",
                    env={"SPECLITE_SEED": "7"})
check(untimed(env7) == untimed(ref), "SPECLITE_SEED supplies the default seed")
code, flag = report("test", "queue.mli.spec", "--impl", "queue_two_list", "--seed", "7", "--count", "1000",
                    env={"SPECLITE_SEED": "3"})
check(untimed(flag) == untimed(ref), "--seed wins over SPECLITE_SEED")
code, h1 = report("test", "hashtbl_ext.mli.spec", "--impl", "mutant_H1", "--seed", "11", "--count", "5000")
seed = h1["config"]["seed"]
code, replay = report("test", "hashtbl_ext.mli.spec", "--impl", "mutant_H1", "--seed", str(seed), "--count", "5000")
check(untimed(h1) == untimed(replay), "seed echo reproduces the run")

code, frame = report("test", "counter.mli.spec", "--impl", "counter_frame_bug", "--count", "100")
check(code == 1 and frame["test"]["failure"]["verdict"]["kind"] == "ModifiesViolation", "frame bug detected")

# path
code, doc = report("path", "graphs/chain.graph", "--from", "a", "--to", "c", "--monitors")
check(code == 0 and doc["path"]["status"] == "Found" and doc["path"]["bridges"] > 0, "path a -> c found")
code, doc = report("path", "graphs/chain.graph", "--from", "a", "--to", "c", "--mutant", "G2")
check(code == 1 and not doc["path"]["agrees"], "G2 disagrees with the oracle")
code, doc = report("path", "graphs/chain.graph", "--from", "a", "--to", "c", "--mutant", "G2", "--monitors")
check(code == 1 and doc["path"]["monitor"] == "completeness", "G2 trips the completeness monitor")
code, doc = report("path", "graphs/cycle.graph", "--from", "a", "--to", "d", "--mutant", "G1")
check(code == 1 and doc["path"]["status"] == "BudgetExceeded", f"G1 exceeds the budget: {doc['path']['status']}")

# error codes
check(run("test", "queue.mli.spec", "--impl", "nope")[0] == 3, "unknown impl is a usage error")
check(run("test", "missing.mli.spec", "--impl", "queue_two_list")[0] == 3, "missing spec is a usage error")
check(run("test", "queue.mli.spec", "--impl", "queue_two_list", "--count", "0")[0] == 3, "count 0 rejected")
check(run()[0] == 3, "no subcommand is a usage error")
check(run("frobnicate")[0] == 3, "unknown subcommand is a usage error")
check(run("path", "graphs/chain.graph", "--from", "zz", "--to", "a")[0] == 3, "unknown vertex")
check(run("test", "queue.mli.spec", "--impl", "queue_two_list", env={"SPECLITE_SEED": "x"})[0] == 3, "bad env seed")

with tempfile.TemporaryDirectory() as tmp:
    bad = os.path.join(tmp, "bad.mli")
    with open(bad, "w") as f:
        f.write("val f : int -> int\n(*@ y = f x\n    ensures y = *)\n")
    check(run("parse", bad)[0] == 2, "parse error exits 2")
    ill = os.path.join(tmp, "ill.mli")
    with open(ill, "w") as f:
        f.write("val f : int -> int\n(*@ y = f x\n    ensures y = true *)\n")
    code, doc = report("analyze", ill)
    check(code == 2 and len(doc["analysis"]["type_errors"]) == 1, "type error exits 2 and is reported")
    check(run("test", ill, "--impl", "counter")[0] == 2, "test on an ill-typed spec exits 2")
    graph = os.path.join(tmp, "bad.graph")
    with open(graph, "w") as f:
        f.write("vertices: a b\nedge: a z\n")
    check(run("path", graph, "--from", "a", "--to", "b")[0] == 3, "malformed graph is a usage error")

for f in failures:
    print("FAIL:", f)
print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
