"""Location of ground-state parity transitions along a field sweep."""

from dataclasses import dataclass

import numpy as np

from .jw import jw_sector_energies
from .lipkin import lipkin_sector_energies

SOLVERS = {"jw": jw_sector_energies, "lipkin": lipkin_sector_energies}


@dataclass
class ParityTransitions:
    fields: np.ndarray  # located crossing fields, increasing
    parity_below: int  # ground parity at the lower end of the scan
    parity_above: int  # ground parity at the upper end

    @property
    def count(self):
        return len(self.fields)


def _ground_parity(split):
    # split = E_+ - E_-; an exact tie is resolved towards +1
    return 1 if split <= 0 else -1


def parity_transitions(model, n, jx, jy, b_min, b_max, points=2000, bisections=40):
    """Fields in ``[b_min, b_max]`` where the ground-state parity changes.

    Sector energies come from the high-precision solvers, so splittings far
    below double precision still have a reliable sign. Crossings closer than
    the grid spacing to one another are missed; ``points`` must resolve them.
    """
    sector_energies = SOLVERS[model]

    def parity_at(b):
        e_plus, e_minus = sector_energies(n, jx, jy, b)
        return _ground_parity(e_plus - e_minus)

    grid = np.linspace(b_min, b_max, points)
    pars = [parity_at(b) for b in grid]
    fields = []
    for k in range(points - 1):
        if pars[k] == pars[k + 1]:
            continue
        lo, hi = grid[k], grid[k + 1]
        for _ in range(bisections):
            mid = 0.5 * (lo + hi)
            if parity_at(mid) == pars[k]:
                lo = mid
            else:
                hi = mid
        fields.append(0.5 * (lo + hi))
    return ParityTransitions(np.array(fields), pars[0], pars[-1])


def sector_splitting(model, n, jx, jy, field):
    """``E_+ - E_-`` as an mpmath number."""
    e_plus, e_minus = SOLVERS[model](n, jx, jy, field)
    return e_plus - e_minus


def is_degenerate(model, n, jx, jy, field, tol=1e-9):
    e_plus, e_minus = SOLVERS[model](n, jx, jy, field)
    return bool(abs(e_plus - e_minus) <= tol * max(1, abs(e_plus)))
