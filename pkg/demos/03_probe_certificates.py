"""Certified signs of f and g at the probe point z* = 5 * 2^b.

Run with ``python demos/03_probe_certificates.py``.
"""
from indhard import h_fn, verify_analytic_lemma
from indhard.uniqueness import f_star_lower_bound

print(f"{'k':>3} {'b':>3} {'d':>7} {'z*':>5}  {'f(z*)':>12} {'g(z*)':>12}  ok")
for k in range(2, 17):
    for b in range(1, k // 2 + 1):
        c = verify_analytic_lemma(k, b)
        print(f"{k:>3} {b:>3} {c.d:>7} {c.z_star:>5}  {float(c.f_value):>12.5f} "
              f"{float(c.g_value):>12.5f}  {c.passed}")

# The closed-form lower bounds used to argue f(z*) > 0 by hand.
print("h(2) =", h_fn(2).str(10))
print("h(3) =", h_fn(3).str(10))
print("bound at k=3, b=1:", f_star_lower_bound(3, 1).str(10))
