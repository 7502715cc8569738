"""tracelab: trace functions over prime fields and their complete-sum calculus.

The library computes dense tables of trace functions mod p (additive and
multiplicative characters, hyper-Kloosterman sums, pullbacks, symmetric
powers), the unitary Fourier / Mellin / multiplicative-convolution calculus
on them, the rank-6 dual transform with its exact identities, exact Hecke
eigenvalue tables for the weight-12 form and its symmetric-square lift, and
desk-scale evaluations of twisted coefficient sums with square-root
cancellation scans.
"""

from .ffield import PrimeField, make_field, inv, dlog
from .xforms import TraceFn, MellinTable, fourier, mellin, mellin_invert, mconv, mconv_direct
from .kloosterman import (KloostermanTable, kl_all, kl_brute, kl_values,
                          kloosterman_s, m_sum_direct, m_sum_formula)
from .tracezoo import TraceSpec, parse_spec, realize, torus_detect
from .correlation import (l_func, l_func_direct, l_hat_check, z_func,
                          z_func_plancherel, corr, QSumParams, q_sum_check,
                          sqrt_cancel_scan)
from .dual6 import GaussTable, gauss_table, gl6, identity_ap, identity_psi, identity_kl2, gl6_via_mellin
from .hecke import HeckeGL2, HeckeGL3, tau_table, sym2_table, rs_partial
from .twisted import (Window, make_window, s_vr, s_total,
                      mellin_decompose_check, scaling_experiment)
from .voronoi2 import BesselEvaluator, bessel_j, vtransform, voronoi_check

__version__ = "0.1.0"

__all__ = [
    "PrimeField", "make_field", "inv", "dlog",
    "TraceFn", "MellinTable", "fourier", "mellin", "mellin_invert", "mconv", "mconv_direct",
    "KloostermanTable", "kl_all", "kl_brute", "kl_values", "kloosterman_s",
    "m_sum_direct", "m_sum_formula",
    "TraceSpec", "parse_spec", "realize", "torus_detect",
    "l_func", "l_func_direct", "l_hat_check", "z_func", "z_func_plancherel",
    "corr", "QSumParams", "q_sum_check", "sqrt_cancel_scan",
    "GaussTable", "gauss_table", "gl6", "identity_ap", "identity_psi",
    "identity_kl2", "gl6_via_mellin",
    "HeckeGL2", "HeckeGL3", "tau_table", "sym2_table", "rs_partial",
    "Window", "make_window", "s_vr", "s_total", "mellin_decompose_check",
    "scaling_experiment",
    "BesselEvaluator", "bessel_j", "vtransform", "voronoi_check",
]
