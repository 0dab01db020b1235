"""The four reduced models on the wave benchmark at r = 5.

Reproduces the headline comparison: the plain Galerkin reduction loses the
Hamiltonian structure (its energy wanders), the structure-preserving variants
keep the reduced energy exactly constant, and the shifted-snapshot variant is
both exact in energy and the most accurate in state.
"""

from dataclasses import replace

from hamrom import run_experiment, table_preset

cfg = replace(table_preset(1), out_dir="out/demo_wave")
print(f"running the wave benchmark ({cfg.n} points, T = {cfg.t_end:g}) "
      f"and four reduced models at r = 5 ...\n")
reports = run_experiment(cfg)

print(f"{'variant':10s} {'E_inf':>10s} {'H_r(0)':>10s} {'energy drift':>13s} {'H_r - H':>12s}")
for rep in reports:
    print(
        f"{rep.variant:10s} {rep.e_inf:10.4f} {rep.energy_initial:10.5f} "
        f"{rep.max_energy_drift:13.2e} {rep.energy_offset_vs_fom:12.3e}"
    )

print(
    "\nreading the table: G-ROM drifts (no structure); SP-ROM-0 is flat but at a\n"
    "slightly wrong level (the projected initial state loses energy); SP-ROM-1\n"
    "and SP-ROM-2 capture the initial energy exactly, and the shifted variant\n"
    "additionally gives the smallest maximum state error."
)
print("\nCSV outputs (plot-ready) under out/demo_wave/")
