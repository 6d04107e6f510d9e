"""Exercise the Python bindings end to end."""

import math

import pynsobolev as ns

g = ns.Graph([("a", 1.0), ("b", 1.0), ("c", 1.0)], [("a", "b", 1.0), ("b", "c", 1.0)])
assert len(g) == 3 and g.ids == ["a", "b", "c"]
assert ns.Graph.parse(g.to_text()).ids == g.ids

value, rho = ns.modulus(g, 2.0, source="a", target="c")
assert abs(value - 2.0 / 3.0) < 1e-9, value
assert abs(rho[1] - 2.0 / 3.0) < 1e-9
value, _ = ns.modulus(ns.Graph.path(2), 2.0, curves=[["0", "1"]])
assert abs(value - 2.0) < 1e-12, value

assert ns.local_slope(g, [0.0, 1.0, 3.0]) == [1.0, 2.0, 2.0]
lp = ns.lp_minimal(g, [0.0, 1.0, 3.0], 2.0)
assert all(x >= 0 for x in lp)

f = ns.StepFunction(g, 1.0, [0.5], [[0.0, 1.0, 2.0], [0.0, 0.0, 0.0]])
assert f.evaluate(0.25) == [0.0, 1.0, 2.0]
assert f.gradient().evaluate(0.25) == [1.0, 1.0, 1.0]
assert ns.StepFunction.parse(f.to_text(), g).to_text() == f.to_text()

report = ns.smoothing_sweep(f, 2.0)
for eps, norm in zip(report.params, report.norms):
    assert abs(norm - math.sqrt(0.3 * eps)) < 1e-12
assert abs(report.rate - 0.5) < 1e-9

shift = ns.shift_sweep(f, 1.0, steps=4)
assert shift.sup_norms is not None and len(shift.params) == 5

lhs, rhs, ok = ns.proof_bound(f, 0.05, 2.0)
assert ok and lhs <= rhs + 1e-12

try:
    ns.modulus(g, 0.5, source="a", target="c")
except ValueError as e:
    assert "exponent" in str(e)
else:
    raise AssertionError("p < 1 accepted")

print("smoke test passed:", report)
