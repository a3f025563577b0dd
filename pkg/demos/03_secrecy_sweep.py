"""Small Monte Carlo sweep: mean secrecy rate versus SNR.

A desk-scale version of the SNR study (50 paired trials instead of 500).
Writes the CSV consumed by the figure scripts and prints the rate table.
The same sweep is available from the command line:

    polarsec sweep --scenario snr --trials 50 --seed 1 --out snr.csv
"""

from polarsec import ScenarioConfig, run_snr_sweep
from polarsec.experiments import SCHEMES

cfg = ScenarioConfig(trials=50, master_seed=1)
result = run_snr_sweep(cfg, [-10.0, -5.0, 0.0, 5.0, 10.0], jobs=1)

result.write_csv("demo_snr_sweep.csv")
print("wrote demo_snr_sweep.csv\n")

points = sorted({row.sweep_value for row in result.rows})
header = "snr_db  " + "  ".join(f"{s:>11s}" for s in SCHEMES)
print(header)
for value in points:
    rows = {row.scheme: row for row in result.rows if row.sweep_value == value}
    cells = "  ".join(f"{rows[s].mean_secrecy_rate:11.4f}" for s in SCHEMES)
    print(f"{value:6.1f}  {cells}")

print("\neavesdropper rates (proposed vs fixed polarization):")
for value in points:
    rows = {row.scheme: row for row in result.rows if row.sweep_value == value}
    print(
        f"  snr {value:6.1f} dB:  proposed {rows['Proposed'].mean_eve_rate:.5f}"
        f"   fpa {rows['FPA'].mean_eve_rate:.5f}"
    )
