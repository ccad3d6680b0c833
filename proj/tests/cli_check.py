"""End-to-end checks of the command line tool. Usage: cli_check.py <path to skewls>"""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = []


def run(*args):
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True)


def expect(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + ("" if cond else f"  {detail}"))
    if not cond:
        failures.append(name)


def circuit(width, gates):
    return {"width": width, "layers": [[{"kind": k, "qubits": q, "params": []}] for k, q in gates]}


with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)
    (d / "h.json").write_text(json.dumps(circuit(1, [("H", [0])])))
    (d / "w7.json").write_text(json.dumps(circuit(7, [("X", [6])])))
    (d / "cx.json").write_text(json.dumps(circuit(3, [("CNOT", [0, 1]), ("H", [2])])))
    (d / "over.json").write_text(json.dumps({"matrix": [[1, 0], [0, 1], [1, 1], [0, [0, 1]]], "rhs": [1, 2, 0.5, 0]}))
    (d / "under.json").write_text(json.dumps({"matrix": [[1, 0], [0, 1], [1, 1], [0, 0.5]], "rhs": [1, -1]}))
    (d / "fact.json").write_text(json.dumps({"a1": [[1, 0], [0, 1], [1, 0], [0, 0]], "a2": [[1, 0], [0, 2]], "rhs": [1, 1, 0, 0]}))
    (d / "bad.json").write_text('{"width": 1,\n "layers": [')

    r = run("estimate-overlap", "--a", d / "h.json", "--b", d / "h.json", "--shots", 0)
    expect("overlap of identical circuits is exactly 1", r.returncode == 0 and r.stdout.strip() == "1+0i", r.stdout)

    r = run("transpile", "-c", d / "w7.json", "--graph", "lattice", "--l1", 2, "--l2", 3)
    expect("lattice too small exits 2", r.returncode == 2, r.stderr)

    r = run("transpile", "-c", d / "cx.json", "--graph", "lattice", "--l1", 2, "--l2", 2, "-o", d / "t.json",
            "--report", d / "tr.json")
    rep = json.loads((d / "tr.json").read_text()) if r.returncode == 0 else {}
    expect("transpile writes circuit and report", r.returncode == 0 and rep.get("lower_bound", 99) <= rep.get("measured_depth", 0))

    r = run("estimate-overlap", "--a", d / "bad.json", "--b", d / "h.json")
    expect("malformed JSON exits 2 with a position", r.returncode == 2 and "bad.json:2:" in r.stderr, r.stderr)

    for sub, inst in [("solve-over", "over.json"), ("solve-under", "under.json"), ("solve-factorized", "fact.json")]:
        out = d / f"{sub}.json"
        r = run(sub, "-i", d / inst, "--mode", "exact", "--seed", 7, "-o", out, "--residual-csv", d / f"{sub}.csv")
        ok = r.returncode == 0
        rep = json.loads(out.read_text()) if ok else {}
        expect(f"{sub} exact within epsilon", ok and rep["residual_gap"] <= rep["epsilon"], r.stderr)
        r2 = run(sub, "-i", d / inst, "--mode", "exact", "--seed", 7, "-o", d / "again.json")
        expect(f"{sub} output reproducible", r2.returncode == 0 and (d / "again.json").read_bytes() == out.read_bytes())

    r = run("solve-over", "-i", d / "over.json", "--mode", "sampled", "--shots", 1000, "-o", d / "s.json")
    seed_line = [l for l in r.stderr.splitlines() if l.startswith("seed: ")]
    rep = json.loads((d / "s.json").read_text()) if r.returncode == 0 else {}
    expect("missing seed is printed and embedded",
           len(seed_line) == 1 and str(rep.get("seeds", {}).get("master")) == seed_line[0][6:], r.stderr)

    r = run("solve-over", "-i", d / "over.json", "--mode", "sampled", "--epsilon", 1e-7, "--seed", 1)
    expect("infeasible shot budget exits 3", r.returncode == 3, r.stderr)

    r = run("solve-over", "-i", d / "under.json", "--mode", "exact", "--seed", 1)
    expect("wrong rhs kind exits 2", r.returncode == 2, r.stderr)

    (d / "cfg.toml").write_text('[solve-over]\nepsilon = 0.05\nseed = 4\n')
    r = run("--config", d / "cfg.toml", "solve-over", "-i", d / "over.json", "--no-depth")
    rep = json.loads(r.stdout) if r.returncode == 0 else {}
    expect("config file supplies defaults", rep.get("epsilon") == 0.05 and rep["seeds"]["master"] == 4)
    r = run("--config", d / "cfg.toml", "solve-over", "-i", d / "over.json", "--no-depth", "--epsilon", 0.2)
    rep = json.loads(r.stdout) if r.returncode == 0 else {}
    expect("flags override the config file", rep.get("epsilon") == 0.2)

    r = run("depth-report", "-c", d / "cx.json", "--construction", "ancilla", "--ancillas", 2)
    expect("depth-report prints bound", r.returncode == 0 and "measured depth:" in r.stdout and "lower bound:" in r.stdout)

    r = run("scaling-bench", "--seed", 1, "--seeds", 3, "--min-exp", 8, "--max-exp", 10, "--emit-plot", d / "p.csv")
    expect("scaling-bench writes a table", r.returncode == 0 and len((d / "p.csv").read_text().splitlines()) == 4)

    r = run("solve-over")
    expect("missing required flag exits 2", r.returncode == 2)

sys.exit(1 if failures else 0)
