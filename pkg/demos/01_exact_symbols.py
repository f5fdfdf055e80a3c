"""Exact 3j-symbols as signed surds, and the identities they satisfy."""
from semi3j import HalfInt, ThreeJArgs, exact_threej, orthogonality_residual, selection_check, threej_m_row

# a small symbol prints as sign * sqrt(p/q)
args = ThreeJArgs.of((1, 1, 2), (0, 0, 0))
w = exact_threej(args)
print("(1 1 2; 0 0 0) =", w, "=", float(w))

# half-integer arguments are passed as strings or HalfInt
args = ThreeJArgs.of(("1/2", "1/2", 1), ("1/2", "-1/2", 0))
print("(1/2 1/2 1; 1/2 -1/2 0) =", exact_threej(args))

# violated selection rules give an exact zero with a reason
bad = ThreeJArgs.of((1, 1, 3), (0, 0, 0))
print("(1 1 3; 0 0 0) ->", selection_check(bad), exact_threej(bad))

# orthogonality over (m1, m2) at fixed m3 holds in rational arithmetic
print("orthogonality residual for (5, 6, 7):", orthogonality_residual(HalfInt(10), HalfInt(12), HalfInt(14)))

# a whole m2 row from the three-term recursion
row = threej_m_row(40, 45, 50, 3)
norm = 81 * sum(v * v for v in row.values())
print(f"row j = (40, 45, 50), m1 = 3: {len(row)} entries, (2 j1 + 1) * sum of squares = {norm:.15f}")

# large arguments stay exact
big = ThreeJArgs.of((500, 500, 500), (0, 0, 0))
print("(500 500 500; 0 0 0) ~", float(exact_threej(big)))
