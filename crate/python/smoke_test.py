"""Smoke test for the electlab Python module.

Build and install first, e.g. `pip install ./crates/python`, then run
`python python/smoke_test.py`.
"""

import math

import electlab

files = electlab.example_files()
names = [name for name, _ in files]
assert "table1.txt" in names, names
table1 = electlab.Profile.parse(dict(files)["table1.txt"])
assert table1.voters == 605
assert table1.candidates == ["A", "B", "C", "D"]

tally = table1.tally()
assert tally.margin("C", "A") == 201
assert tally.margin(1, 2) == 203
assert tally.condorcet() == ("none", None)
assert tally.is_cyclic()
assert tally.matrix()[0][1] == 403

minimax = table1.run("minimax")
assert minimax["winners"] == ["D"], minimax
assert minimax["scores"] == ["201", "201", "203", "1"]
assert table1.run("copeland")["winners"] == ["A", "B", "C"]

cmo = table1.cmo()
assert cmo["winners"] == ["D"] and cmo["confirmed"]
lr = {c["candidate"]: c["lr"] for c in cmo["candidates"]}
assert math.isclose(lr["A"], 1.6594e-15, rel_tol=1e-2), lr
assert abs(lr["D"] - 0.9992) <= 5e-4, lr

p = electlab.Profile.from_ballots(["X", "Y", "Z"], [(3, [["X"], ["Y", "Z"]]), (2, [["Z"]])])
assert p.voters == 5 and len(p) == 2
assert electlab.Profile.parse(p.to_text()).to_text() == p.to_text()
assert p.run("minimax-t2")["winners"] == ["X"]

try:
    electlab.Profile.parse("candidates: A, B\n1: A>C\n")
except ValueError as e:
    assert "line 2" in str(e), e
else:
    raise AssertionError("unknown candidate accepted")

assert "minimax-t2" in electlab.systems()

rep = electlab.run_comparison("error", trials=100, candidates=5, seed=3)
assert rep["qualifying"] == 100
assert rep["systems"][0]["system"] == "minimax-t2"
assert rep == electlab.run_comparison("error", trials=100, candidates=5, seed=3)

rate = electlab.paradox_rate(trials=2000, candidates=5, rating_mode="random-continuous")
assert 0.2 < rate["rate"] < 0.32, rate

ties = electlab.tie_rate("copeland", trials=100, candidates=4)
assert ties["tie_rate"] == 1.0, ties

print("electlab smoke test passed")
