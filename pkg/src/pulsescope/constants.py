"""Physical constants and the one convention constant of the pipeline."""

from scipy.constants import c as C_LIGHT          # m/s
from scipy.constants import epsilon_0 as EPSILON_0  # F/m
from scipy.constants import hbar as HBAR          # J*s

# Energy-to-amplitude convention constant of the time-domain synthesis
#   E(rho, t) = (FIELD_CALIBRATION / 2 pi) * int_R dw E(rho, w) e^{-i w t}.
# Pinned so that the maximum focal pulse area comes out as
#   eta = 0.64 * A * sqrt(U * Gamma0 / (hbar * omega0 * Gamma))
# for a Gaussian spectrum with Gamma = 10 * omega0:
#   FIELD_CALIBRATION = 4 pi * 0.64 / (sqrt(6 pi) * Jmax * sqrt(10)),
# with Jmax = max_tau |int_R phi(w) e^{-i w tau} dw| = 8.5925821 in
# carrier units at that width.
FIELD_CALIBRATION = 0.06817349918343474
