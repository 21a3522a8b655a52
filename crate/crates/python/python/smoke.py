"""Quick end-to-end check of the Python bindings."""

import ternarith as t

assert t.to_unbalanced(8) == "0t22"
assert t.to_balanced(8) == "10T"
assert t.to_balanced(-7) == "T1T"
assert t.from_unbalanced("0t210") == 21
assert t.from_balanced("1T1") == 7
assert t.eval_cell("TFA_P", [2, 2, 1]) == (2, 1)
try:
    t.eval_cell("TFA_P", [0, 0, 2])
except t.TernarithError as e:
    print("partial TFA rejects carry-in 2:", e)
else:
    raise AssertionError("expected TernarithError")

rca = t.Netlist.rca(4)
print(rca, rca.census())
assert rca.simulate({"A": 5, "B": 7}) == {"S": 12, "COUT": 0}
assert t.Netlist.from_json(rca.to_json()) == rca

mul = t.Netlist.multiplier(4, 3)
assert mul.output_total({"A": 80, "B": 26}) == 80 * 26
report = mul.verify()
print(report["pass"], report["plan"])
assert report["pass"] and report["plan"]["exhaustive"]

cert = t.Netlist.compressor(13).check_partial_safety()
assert cert["pass"]

bad = t.Netlist.miswired_rca(2)
assert not bad.verify()["pass"]
assert not bad.check_partial_safety()["pass"]

eq = t.verify_equivalence(t.Netlist.rca(3, "complete"), t.Netlist.rca(3))
assert eq["pass"]

claims = t.claim_suite()
for c in claims:
    print("PASS" if c["pass"] else "FAIL", c["id"], c["name"])
assert all(c["pass"] for c in claims)
print("smoke ok")
