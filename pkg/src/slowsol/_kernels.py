"""Numba kernel for the atomic tau-sweep of one zeta column.

The three-level amplitudes are non-stiff at EIT parameters, so a classical
4th-order step with cubic field interpolation at the half steps keeps the
tau error at O(dtau^4) while staying cheap enough for refinement studies.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def sweep_column(psi1_0, psi2_0, psi3_0, omega_a, omega_b, dtau, delta, gamma,
                 psi1, psi2, psi3):
    """Integrate the amplitudes along tau for fixed fields Omega_a/b(tau).

    The fields are sampled on the tau grid; half-step values come from
    4-point Lagrange stencils (one-sided at both ends).  Results are written
    into the preallocated complex output arrays.
    """
    n = omega_a.shape[0]
    damp = -(1j * delta + 0.5 * gamma)
    p1 = psi1_0
    p2 = psi2_0
    p3 = psi3_0
    psi1[0] = p1
    psi2[0] = p2
    psi3[0] = p3
    half = 0.5 * dtau
    sixth = dtau / 6.0
    for i in range(n - 1):
        oa0 = omega_a[i]
        ob0 = omega_b[i]
        oa1 = omega_a[i + 1]
        ob1 = omega_b[i + 1]
        if n < 4:
            oam = 0.5 * (oa0 + oa1)
            obm = 0.5 * (ob0 + ob1)
        elif i == 0:
            oam = (5.0 * omega_a[0] + 15.0 * omega_a[1]
                   - 5.0 * omega_a[2] + omega_a[3]) / 16.0
            obm = (5.0 * omega_b[0] + 15.0 * omega_b[1]
                   - 5.0 * omega_b[2] + omega_b[3]) / 16.0
        elif i == n - 2:
            oam = (omega_a[n - 4] - 5.0 * omega_a[n - 3]
                   + 15.0 * omega_a[n - 2] + 5.0 * omega_a[n - 1]) / 16.0
            obm = (omega_b[n - 4] - 5.0 * omega_b[n - 3]
                   + 15.0 * omega_b[n - 2] + 5.0 * omega_b[n - 1]) / 16.0
        else:
            oam = (-omega_a[i - 1] + 9.0 * omega_a[i]
                   + 9.0 * omega_a[i + 1] - omega_a[i + 2]) / 16.0
            obm = (-omega_b[i - 1] + 9.0 * omega_b[i]
                   + 9.0 * omega_b[i + 1] - omega_b[i + 2]) / 16.0

        a1 = 0.5j * np.conj(oa0) * p3
        b1 = 0.5j * np.conj(ob0) * p3
        c1 = damp * p3 + 0.5j * (oa0 * p1 + ob0 * p2)

        t1 = p1 + half * a1
        t2 = p2 + half * b1
        t3 = p3 + half * c1
        a2 = 0.5j * np.conj(oam) * t3
        b2 = 0.5j * np.conj(obm) * t3
        c2 = damp * t3 + 0.5j * (oam * t1 + obm * t2)

        t1 = p1 + half * a2
        t2 = p2 + half * b2
        t3 = p3 + half * c2
        a3 = 0.5j * np.conj(oam) * t3
        b3 = 0.5j * np.conj(obm) * t3
        c3 = damp * t3 + 0.5j * (oam * t1 + obm * t2)

        t1 = p1 + dtau * a3
        t2 = p2 + dtau * b3
        t3 = p3 + dtau * c3
        a4 = 0.5j * np.conj(oa1) * t3
        b4 = 0.5j * np.conj(ob1) * t3
        c4 = damp * t3 + 0.5j * (oa1 * t1 + ob1 * t2)

        p1 = p1 + sixth * (a1 + 2.0 * (a2 + a3) + a4)
        p2 = p2 + sixth * (b1 + 2.0 * (b2 + b3) + b4)
        p3 = p3 + sixth * (c1 + 2.0 * (c2 + c3) + c4)
        psi1[i + 1] = p1
        psi2[i + 1] = p2
        psi3[i + 1] = p3
