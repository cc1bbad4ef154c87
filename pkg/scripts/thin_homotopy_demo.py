"""Transport across a thin family is trivial; across a family that sweeps area it is not.

Prints drift of the lifted endpoint and the surface holonomy for both families
on the ``double`` scenario.
"""
import numpy as np

from catransport import fixtures as fx
from catransport.catalog import get_scenario
from catransport.connection import check_thin_homotopy, surface_horizontal_lift
from catransport.decorated import kappa_star


def main(M=80, N=200):
    scn = get_scenario("double")
    rng = np.random.default_rng(0)
    q0, h = scn.G.random(rng), scn.H.random(rng)
    K = scn.dm.K

    th = check_thin_homotopy(scn, fx.thin_family(M, N), q0)
    hol = K.distance(kappa_star(scn, th["lift"], h), K.identity())
    print(f"thin family {M}x{N}: drift {th['drift']:.2e}  minors {th['minors']:.2e}  holonomy {hol:.2e}")

    L = surface_horizontal_lift(scn, fx.sampled_surface(M, N), q0)
    drift = scn.G.distance(L.fiber[-1, 0], L.fiber[0, 0])
    hol = K.distance(kappa_star(scn, L, h), K.identity())
    print(f"area-sweeping family {M}x{N}: drift {drift:.2e}  holonomy {hol:.2e}")


if __name__ == "__main__":
    main()
