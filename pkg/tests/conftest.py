import random

import pytest

from latticeforms.lattice import determinant, direct_sum, rescale, validate_lattice

A1 = validate_lattice([[2]], "A1")
A2 = validate_lattice([[2, -1], [-1, 2]], "A2")
A3 = validate_lattice([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], "A3")
D4 = validate_lattice([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]], "D4")
H = validate_lattice([[0, 1], [1, 0]], "H")
H2 = validate_lattice([[0, 2], [2, 0]], "H(2)")
A1_2 = rescale(A1, 2)
A1A1 = direct_sum(A1, A1)
A1H = direct_sum(A1, H)
A2H = direct_sum(A2, H)
A1x3 = direct_sum(A1A1, A1)
DIAG22m2 = validate_lattice([[2, 0, 0], [0, 2, 0], [0, 0, -2]], "diag(2,2,-2)")
MIXED = validate_lattice([[2, 1], [1, -4]], "[[2,1],[1,-4]]")

# small lattices with |D| <= 200
BATTERY = {
    "A1": A1,
    "A2": A2,
    "A1(2)": A1_2,
    "A1+A1": A1A1,
    "H": H,
    "H(2)": H2,
    "A2+H": A2H,
    "A1+H": A1H,
    "A3": A3,
    "A1+A1+A1": A1x3,
    "diag(2,2,-2)": DIAG22m2,
    "D4": D4,
    "mixed": MIXED,
}


def random_even_lattices(count, seed=0, max_rank=4, max_det=5000, entry=4):
    """Seeded random non-degenerate even Gram matrices with |det| <= max_det."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_rank)
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = 2 * rng.randint(-entry // 2 - 1, entry // 2 + 1)
            for j in range(i + 1, n):
                G[i][j] = G[j][i] = rng.randint(-entry, entry)
        det = determinant(G)
        if det != 0 and abs(det) <= max_det:
            out.append(validate_lattice(G))
    return out


@pytest.fixture(params=list(BATTERY), ids=list(BATTERY))
def battery_lattice(request):
    return BATTERY[request.param]
