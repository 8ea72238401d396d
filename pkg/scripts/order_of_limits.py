"""m3(epsilon, N) for the Curie-Weiss field and <q> for the flea-perturbed double well.

The small-field column shows where symmetry restoration needs epsilon below the
tunnelling splitting, which closes exponentially in N.
"""

import numpy as np

from semiclassical import experiments, models

EPS = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
NS = [4, 8, 12, 16, 20, 40, 100, 2000]


def main():
    scan = experiments.flea_scan_cw(0.5, 1.0, EPS, NS)
    print("m3 with field +epsilon (rows) at size N (columns), B = 0.5, J = 1")
    print("eps \\ N " + "".join(f"{N:>9d}" for N in NS))
    for e, row in zip(EPS, scan["m3"]):
        print(f"{e:8.0e} " + "".join(f"{m:9.4f}" for m in row))
    print(f"broken branch: -{scan['target']:.4f}")
    flea = models.Perturbation("schrodinger_flea", amplitude=0.1, center=1.0, width=0.2)
    out = experiments.flea_schrodinger([0.5, 0.2, 0.1, 0.05, 0.02], flea)
    print("\nflea at q0 = 1, delta = 0.1, w = 0.2")
    for r in out["rows"]:
        print(f"  hbar {r['hbar']:5.2f}  E0 {r['energy']:.6f}  <q> {r['q_mean']: .4f}")
    base = experiments.flea_schrodinger([0.5, 0.2, 0.1, 0.05, 0.02], models.Perturbation("schrodinger_flea"))
    print("unperturbed <q>: " + ", ".join(f"{r['q_mean']:.1e}" for r in base["rows"]))
    print(f"max |<q>| without flea: {np.max([abs(r['q_mean']) for r in base['rows']]):.1e}")


if __name__ == "__main__":
    main()
