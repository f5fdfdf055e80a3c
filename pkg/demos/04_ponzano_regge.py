"""Compare the uniform cosine formula with exact values along an m1 row."""
from semi3j import ThreeJArgs, asymptotic_threej, exact_threej
from semi3j.studies import grid_error_ratio, loglog_slope, scaling_study, scan_m1

args = ThreeJArgs.of((100, 110, 120), (10, -50, 40))
res = asymptotic_threej(args)
ex = float(exact_threej(args))
print(f"(100 110 120; 10 -50 40): exact {ex:.10e}, asymptotic {res.value:.10e}, "
      f"relative error {abs(res.value - ex) / abs(ex):.2e}")

print("\n  m2     exact          asymptotic     region")
for row in scan_m1((30, 32, 34), 4)[::8]:
    a = "" if row.asymptotic is None else f"{row.asymptotic: .6e}"
    print(f"{float(row.m2):5.0f}  {row.exact: .6e}  {a:>14}  {row.region}")

# over the whole grid the error in the allowed interior is small
ratio, cells = grid_error_ratio((100, 110, 120))
print(f"\nRMS error / RMS value on {cells} interior cells: {ratio:.4f}")

# and it drops as all quantum numbers grow together
pts = scaling_study((8, 8, 8), (0, 0, 0), (1, 2, 4, 8))
for p in pts:
    print(f"lambda {p.lam}: max abs error {p.max_abs_err:.3e} over {p.cells} cells")
print("log-log slope:", round(loglog_slope(pts), 3))
