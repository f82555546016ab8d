"""Command-line checks: report schema, determinism, exit codes, negative control.

usage: cli_reports.py <pidlab binary> <schema.json>
"""

import json
import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

failures = []


def check(name, ok, detail=""):
    print(("ok    " if ok else "FAIL  ") + name + (f"  ({detail})" if detail else ""))
    if not ok:
        failures.append(name)


def run(binary, *args):
    return subprocess.run([binary, *map(str, args)], capture_output=True, text=True)


def h(*ps):
    return -sum(p * math.log2(p) for p in ps if p > 0)


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    validator = jsonschema.Draft202012Validator(json.loads(Path(schema_path).read_text()))
    tmp = Path(tempfile.mkdtemp(prefix="pidlab_cli_"))
    corpus = tmp / "corpus"

    def report(*args):
        out = run(binary, "--format", "json", *args)
        if out.returncode != 0:
            check(" ".join(map(str, args)) + " exits 0", False, out.stderr.strip())
            return None, out.stdout
        doc = json.loads(out.stdout)
        errors = sorted(validator.iter_errors(doc), key=str)
        check(f"{args[0]} report validates", not errors, errors[0].message if errors else "")
        check(f"{args[0]} report round-trips", json.dumps(json.loads(json.dumps(doc)), indent=2) == json.dumps(doc, indent=2))
        return doc, out.stdout

    report("corpus", corpus)
    first = (corpus / "and.json").read_bytes()
    run(binary, "corpus", corpus)
    check("corpus emission is byte-stable", first == (corpus / "and.json").read_bytes())
    probs = json.loads(first)["probs"]
    check("and.json has four 1/4 entries", [p["p"] for p in probs] == ["1/4"] * 4)
    check("rdnunqxor.json has 32 outcomes", len(json.loads((corpus / "rdnunqxor.json").read_text())["probs"]) == 32)

    doc, _ = report("info", corpus / "ex5.json")
    if doc:
        v = doc["quantities"]["H(Q_Y^X)"]["value"]
        check("info ex5: H(Q_Y^X) = 1.151", abs(v - 1.151) <= 2e-3, f"{v:.6f}")

    doc, text = report("decompose", corpus / "and.json", "--measure", "i2")
    if doc:
        # the deterministic witness Q = [X1 = X2 = 0] is feasible for AND
        v = doc["quantities"]["redundancy"]["value"]
        want = h(0.75, 0.25) - 0.75 * h(1 / 3, 2 / 3)
        check("decompose and i2 redundancy", abs(v - want) <= 1e-3, f"{v:.6f} vs {want:.6f}")
        check("decompose is deterministic", text == run(binary, "--format", "json", "decompose", corpus / "and.json", "--measure", "i2").stdout)
    svg = tmp / "copy.svg"
    doc, _ = report("decompose", corpus / "copy.json", "--measure", "i3", "--svg", svg)
    check("svg written", svg.exists() and svg.read_text().lstrip().startswith("<svg"))

    doc, _ = report("lattice", corpus / "ex1.partitions")
    if doc:
        check("lattice ex1 meet", doc["results"]["meet"] == "w1w2w4|w3", doc["results"]["meet"])

    doc, _ = report("axioms", "--measure", "i1", "--trials", "20")
    if doc:
        status = {row["property"]: row["status"] for row in doc["properties"]}
        check("axioms i1: identity violated", status["Id"] == "violated")

    only = "1,2,4,5,6,7"
    doc, text = report("report", "--only", only)
    if doc:
        check("report on fresh corpus passes", all(c["passed"] for c in doc["criteria"]))
        again = run(binary, "--format", "json", "report", "--only", only).stdout
        check("report is byte-identical across runs", text == again)
    doc, _ = report("report", "--only", only, "--corpus", corpus)
    if doc:
        check("report on emitted corpus passes", all(c["passed"] for c in doc["criteria"]))

    # negative control: move mass between two EX5 outcomes
    tampered = tmp / "tampered"
    shutil.copytree(corpus, tampered)
    ex5 = json.loads((tampered / "ex5.json").read_text())
    ex5["probs"][0]["p"], ex5["probs"][1]["p"] = ex5["probs"][1]["p"], ex5["probs"][0]["p"]
    (tampered / "ex5.json").write_text(json.dumps(ex5, indent=2))
    doc, _ = report("report", "--only", "1", "--corpus", tampered)
    if doc:
        crit = doc["criteria"][0]
        check("tampered corpus fails criterion 1", not crit["passed"])
        check("failure lists the mismatch", any("MISMATCH" in line for line in crit["lines"]))

    (tmp / "float.json").write_text(json.dumps({"vars": [{"name": "X", "alphabet": ["0", "1"]}, {"name": "Y", "alphabet": ["0", "1"]}],
                                                "probs": [{"outcome": ["0", "0"], "p": 0.5}, {"outcome": ["1", "1"], "p": 0.5}]}))
    for args, code in [(["decompose", corpus / "and.json", "--measure", "i9"], 2),
                       (["info", tmp / "missing.json"], 2),
                       (["--exact", "info", tmp / "float.json"], 2),
                       (["info", tmp / "float.json"], 0),
                       (["lattice"], 2),
                       (["--format", "xml", "info", corpus / "and.json"], 2)]:
        got = run(binary, *args).returncode
        check("exit code for " + " ".join(map(str, args[:3])), got == code, f"{got}")

    shutil.rmtree(tmp)
    print(f"{len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
