"""Exact q,zeta-series arithmetic for theta functions, quasi-Jacobi forms and elliptic genera."""

from __future__ import annotations

from .coeffs import GQ, ZetaRat
from .dmvv import DmvvTable, TripleSeries, borcherds_product, extract_cml, sym_product_genus
from .dsl import format_poly, parse_expr, parse_poly
from .errors import *  # noqa: F401,F403
from .genus import (chi_y, elliptic_genus, jacobi_normalized, ochanine_direct,
                    ochanine_via_specialization, specialize_torsion)
from .models import VarietyModel, load_model
from .quasijacobi import (GeneratorPoly, d_tau, d_z, depth, expand, expansion_rank, identity_check,
                          rc_bracket, rc_bracket_n, recognize, serre_d)
from .series import QSeries, QYSeries, SupportEnvelope
from .theta import ebar, ebar_q, phi, theta
from .transform import LatticeSumSpec, brute_lattice_sum, modular_check, shift_check

__version__ = "0.1.0"
