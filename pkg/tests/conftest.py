import math
import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=50,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

TWO_PI = 2 * math.pi

# Czolczynski et al. laboratory clocks (SI units)
CZ = dict(g=9.81, m=0.158, M=11.856, c=11.856, k=1.186, l=0.269, gamma=0.122)


# Generating matrices exactly as printed for two pendulums (test oracles)
def small_sigma_matrix(omega):
    import numpy as np
    o2 = omega ** 2
    return np.array([[0, 1, 0, 0, 0, 0],
                     [-1, 0, 0, 0, o2, 0],
                     [0, 0, 0, 1, 0, 0],
                     [0, 0, -1, 0, o2, 0],
                     [0, 0, 0, 0, 0, 1],
                     [0, 0, 0, 0, -o2, 0]], dtype=float)


def three_dof_matrix(sigma, omega):
    import numpy as np
    o2 = omega ** 2
    return np.array([[0, 1, 0, 0, 0, 0],
                     [-1, 0, 0, 0, o2, sigma],
                     [0, 0, 0, 1, 0, 0],
                     [0, 0, -1, 0, o2, sigma],
                     [0, 0, 0, 0, 0, 1],
                     [0, 0, 0, 0, -o2, -sigma]], dtype=float)


def two_mass_matrix(sigma, kap):
    import numpy as np
    s = sigma
    return np.array([[0, 1, 0, 0, 0, 0, 0, 0],
                     [-1, 0, 0, 0, kap, s, -kap, 0],
                     [0, 0, 0, 1, 0, 0, 0, 0],
                     [0, 0, -1, 0, -kap, 0, kap, s],
                     [0, 0, 0, 0, 0, 1, 0, 0],
                     [0, 0, 0, 0, -kap, -s, kap, 0],
                     [0, 0, 0, 0, 0, 0, 0, 1],
                     [0, 0, 0, 0, kap, 0, -kap, -s]], dtype=float)


# PASS/FAIL lines recorded by the acceptance suite, echoed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
