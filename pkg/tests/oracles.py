"""Independent reference computations used by the tests.

The Clebsch-Gordan oracle couples two spins by brute force: start from each
highest-weight vector, orthogonalize against the higher multiplets and lower
with J_-.  Everything stays rational by working in the rescaled basis
``u_m`` with ``J_- u_m = (j + m) u_{m-1}``, whose Gram matrix is diagonal
with rational entries ``g(m)``.  A coefficient then comes out as a sign and
a rational square.
"""

from fractions import Fraction


def _ms(j):
    return [j - i for i in range(int(2 * j) + 1)]


def _gram(j):
    # e_m = c_m u_m with c_j = 1 and c_{m-1}^2 = c_m^2 (j + m) / (j - m + 1)
    g, c2 = {}, Fraction(1)
    for m in _ms(j):
        g[m] = 1 / c2
        if m > -j:
            c2 = c2 * (j + m) / (j - m + 1)
    return g


def _lower(vec, j1, j2):
    out = {}
    for (m1, m2), a in vec.items():
        if m1 > -j1:
            key = (m1 - 1, m2)
            out[key] = out.get(key, 0) + a * (j1 + m1)
        if m2 > -j2:
            key = (m1, m2 - 1)
            out[key] = out.get(key, 0) + a * (j2 + m2)
    return {k: v for k, v in out.items() if v}


def ladder_cg_table(j1, j2):
    """``{(J, M, m1, m2): (sign, square)}`` for all nonzero coefficients."""
    j1, j2 = Fraction(j1), Fraction(j2)
    g1, g2 = _gram(j1), _gram(j2)

    def inner(a, b):
        return sum(v * b[k] * g1[k[0]] * g2[k[1]] for k, v in a.items() if k in b)

    multiplets = {}  # J -> {M: vector}
    table = {}
    J = j1 + j2
    while J >= abs(j1 - j2):
        top = {(m1, J - m1): Fraction(1) for m1 in _ms(j1) if abs(J - m1) <= j2}
        vec = {(j1, J - j1): Fraction(1)} if abs(J - j1) <= j2 else dict(top)
        for higher in multiplets.values():
            w = higher[J]
            coef = inner(vec, w) / inner(w, w)
            for k, v in w.items():
                vec[k] = vec.get(k, 0) - coef * v
        vec = {k: v for k, v in vec.items() if v}
        if vec.get((j1, J - j1), 0) < 0:  # Condon-Shortley phase
            vec = {k: -v for k, v in vec.items()}
        states = {}
        M = J
        while True:
            states[M] = vec
            norm2 = inner(vec, vec)
            for (m1, m2), a in vec.items():
                sq = a * a * g1[m1] * g2[m2] / norm2
                table[(J, M, m1, m2)] = (1 if a > 0 else -1, sq)
            if M == -J:
                break
            vec = _lower(vec, j1, j2)
            M -= 1
        multiplets[J] = states
        J -= 1
    return table
