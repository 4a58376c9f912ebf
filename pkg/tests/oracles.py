"""Independent reference values shared by the test modules."""

import math

from scipy.special import jn_zeros, j0

J11 = float(jn_zeros(1, 1)[0])  # first positive zero of J1
U0_BESSEL = 1.0 - 1.0 / float(j0(J11))
TWO_PI_E = 2.0 * math.pi * math.e


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)
