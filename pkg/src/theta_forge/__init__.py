"""Exact theta series, Eisenstein series and Hecke operators for integral quadratic forms."""

from .qform import GramMatrix, parse_gram, profile, validate
from .dirichlet import QuadCharacter, TRIVIAL, kronecker
from .bernoulli import gen_bernoulli, l_value
from .lattice import RepTable, rep_count_shell, theta_series, theta_series_oracle
from .qseries import QSeries, decompose, eisenstein_G, eisenstein_H, eisenstein_general, hecke_apply
from .dims import classify_dim2, dim_mk
from .identities import closed_form, closed_rq, jacobi_r6, rq_prime_power, rq_square

__version__ = "0.1.0"
