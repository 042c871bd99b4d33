"""Evaluate the one- and two-parameter functions by each method and watch
the routes agree.

Run:  python demos/01_evaluating_the_function.py
"""

import numpy as np

from mittag import MLParams, Method, eval_ml, eval_ml_power, resolve_method

print("=== closed forms ===")
print(f"E_1(1)        = {eval_ml(MLParams(1.0), 1.0):.15f}   (e)")
print(f"E_2(4)        = {eval_ml(MLParams(2.0), 4.0):.15f}   (cosh 2)")
print(f"E_1/2(-1)     = {eval_ml(MLParams(0.5), -1.0):.15f}   (e erfc 1)")

print("\n=== huge integer orders, all in log space ===")
for n in (25, 26):
    print(f"E_{n}(30^{n}) = {eval_ml_power(float(n), 30.0, 1):.5e}")

print("\n=== the methods agree on their overlap ===")
print(f"{'alpha':>6} {'x':>8} {'series':>24} {'integral':>24} {'rel diff':>10}")
for alpha in (0.25, 0.5, 0.75):
    for x in (2.0, 10.0, 20.0):
        z = -(x**alpha)
        s = eval_ml(MLParams(alpha), z, Method.SERIES)
        i = eval_ml(MLParams(alpha), z, Method.INTEGRAL_REP)
        print(f"{alpha:6.2f} {x:8.1f} {s:24.16e} {i:24.16e} {abs(s - i) / abs(s):10.1e}")

print("\n=== auto dispatch across the axis (alpha = 0.6) ===")
for z in (-2e4, -300.0, -3.0, 0.0, 3.0, 40.0):
    m = resolve_method(MLParams(0.6), z)
    print(f"  E_0.6({z:>9.6g}) = {eval_ml(MLParams(0.6), z):16.9e}   via {m.value}")

print("\n=== the two-parameter family at a grid ===")
for beta in (0.5, 1.0, 2.0, 8.0):
    row = [eval_ml(MLParams(0.5, beta), z) for z in (-4.0, -1.0, 1.0)]
    print(f"  beta={beta:4.1f}: " + "  ".join(f"{v:12.6g}" for v in row))
