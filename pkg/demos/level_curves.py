"""Level-curve measures on the torus: one rational, two products.

The script inspects the bidegree-(2,1) rational inner function built from
p = 4 - 3 z_1 + z_1^2 - z_2 - z_1 z_2 (singular at (1,1), exceptional value
-1, where the measure picks up a vertical line of constant 1/2), then the
two classical product families, and finally shells out to the CLI entry
point to emit the level-curve CSV and SVG for all three into demo_output/.
"""

import json
import math
from pathlib import Path

from clark_measures import (
    DiskPoint,
    InnerFunction1D,
    Poly1,
    ProductInner,
    RIF_n1,
    TorusPoint,
    UnimodularConstant,
    exceptional_values,
    line_constant,
    main,
    product_branch_measure,
    rif_clark_measure,
    singularities,
)

R = RIF_n1(p1=Poly1((4, -3, 1)), p2=Poly1((-1, -1)), n=2)
print("rational inner function p~/p, bidegree (2,1):")
for tau, gamma in singularities(R):
    print(f"  torus singularity at angles ({tau.theta:.3e}, {gamma.theta:.3e})")
for value in exceptional_values(R):
    print(f"  exceptional value alpha = {value.alpha:.6f}")
tau = singularities(R)[0][0]
print(f"  vertical-line constant at the singularity: {line_constant(R, tau):.12f}")
for nu in (0.0, math.pi / 2, math.pi):
    mu = rif_clark_measure(R, UnimodularConstant.from_nu(nu))
    kind = f"{len(mu.curves)} curve(s)" + (
        f" + {len(mu.lines)} line(s)" if mu.lines else ""
    )
    print(f"  alpha = e^(i {nu:.4f}): {kind}")
print()

EXP = InnerFunction1D(singular_atoms=((TorusPoint(0.0), 1.0),))
products = {
    "exp x exp": ProductInner(EXP, EXP),
    "exp x blaschke": ProductInner(
        EXP, InnerFunction1D(monomial_power=1, blaschke_zeros=(DiskPoint(0.5j),))
    ),
}
for name, P in products.items():
    mu = product_branch_measure(P, UnimodularConstant.from_nu(math.pi / 4), K=25)
    print(
        f"{name}: {len(mu.curves)} branch graphs,"
        f" tail bound {mu.tail_bound:.3e}"
    )
print()

out = Path("demo_output")
out.mkdir(exist_ok=True)
rif_spec = out / "rif.json"
rif_spec.write_text(
    json.dumps({"p1": [[4, 0], [-3, 0], [1, 0]], "p2": [[-1, 0], [-1, 0]], "n": 2})
)
exp_spec = {"singular_atoms": [{"angle": 0.0, "mass": 1.0}]}
ee_spec = out / "expexp.json"
ee_spec.write_text(json.dumps({"phi": exp_spec, "psi": exp_spec}))
be_spec = out / "blaschke_exp.json"
be_spec.write_text(
    json.dumps(
        {"phi": exp_spec, "psi": {"monomial": 1, "blaschke_zeros": [[0.0, 0.5]]}}
    )
)

# Four level families of the rational example; the last one is exceptional
# and the emitted CSV contains its vertical line.
main(
    [
        "plot",
        "--rif",
        str(rif_spec),
        "--alpha-list",
        "0,0.785398,1.570796,3.141593",
        "--output",
        str(out / "rif_levels"),
    ]
)
main(
    [
        "plot",
        "--product",
        str(be_spec),
        "--alpha",
        "0.785398",
        "--output",
        str(out / "blaschke_exp_levels"),
    ]
)
main(
    [
        "plot",
        "--product",
        str(ee_spec),
        "--alpha",
        "0",
        "--output",
        str(out / "expexp_levels"),
    ]
)
